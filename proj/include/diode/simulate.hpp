// simulate.hpp - one parameter point, both propagation directions.

#pragma once

#include <optional>
#include <variant>

#include "diode/observables.hpp"
#include "diode/pulse_solver.hpp"

namespace diode {

template <typename Real = double>
struct DirectionResult {
  Real transmittivity{0};
  Real rate_ref{0};
  Real rate_trans{0};         // flux - rate_ref
  Real rate_trans_direct{0};  // assembled from the output mode
  Real conservation_error{0}; // relative; time-domain mode also counts excitation left in the atoms
  Real max_residual{0};
  Real max_condition{0};
};

template <typename Real = double>
struct ScatterResult {
  Real t_fwd{0};
  Real t_bwd{0};
  Real flux{0};
  DirectionResult<Real> fwd{};
  DirectionResult<Real> bwd{};
  Real r1{0};
  std::optional<Real> r2, r3, r4;  // empty when both directions are blocked
  SolverMode mode{SolverMode::SteadyState};

  Real rate_ref_fwd() const { return fwd.rate_ref; }
  Real rate_trans_fwd() const { return fwd.rate_trans; }
  Real rate_ref_bwd() const { return bwd.rate_ref; }
  Real rate_trans_bwd() const { return bwd.rate_trans; }
  Real max_residual() const { return std::max(fwd.max_residual, bwd.max_residual); }
  Real max_condition() const { return std::max(fwd.max_condition, bwd.max_condition); }
  Real conservation_error() const { return std::max(fwd.conservation_error, bwd.conservation_error); }
};

namespace detail {

/// Amplitudes c_n of a Fock-type input on 0..n_max.
template <typename Real>
std::vector<Complex<Real>> fock_amplitudes(const InputState<Real>& input) {
  if (auto f = std::get_if<Fock>(&input.kind)) {
    std::vector<Complex<Real>> c(static_cast<std::size_t>(f->n) + 1);
    c.back() = Real(1);
    return c;
  }
  return std::get<Superposition<Real>>(input.kind).coefficients;
}

/// sum_{m,n} conj(c_m) c_n block(m, n)
template <typename Real, typename Block>
Real weighted(const std::vector<Complex<Real>>& c, const Block& block) {
  Complex<Real> total{};
  for (std::size_t m = 0; m < c.size(); ++m)
    for (std::size_t n = 0; n < c.size(); ++n) {
      const Complex<Real> w = std::conj(c[m]) * c[n];
      if (w == Complex<Real>()) continue;
      total += w * block(static_cast<int>(m), static_cast<int>(n));
    }
  return std::real(total);
}

template <typename Real>
DirectionResult<Real> fock_direction(const DeviceParams<Real>& params, const std::vector<Complex<Real>>& c,
                                     const PulseSpec<Real>& pulse, const SolverConfig<Real>& config,
                                     const BuildOptions<Real>& options, Direction d) {
  const int n_max = static_cast<int>(c.size()) - 1;
  const auto h = build_hierarchy(params, n_max, d, pulse, options);
  const Channel ref_ch = reflected_channel(d);
  const Channel out_ch = transmitted_channel(d);
  const Complex<Real> xi = pulse.amplitude();
  Real photons = 0;
  for (std::size_t n = 0; n < c.size(); ++n) photons += std::norm(c[n]) * static_cast<Real>(n);
  const Real flux = photons * pulse.omega / Real(2);

  DirectionResult<Real> r;
  if (config.mode == SolverMode::SteadyState) {
    const auto sol = solve_steady_fock(h);
    const auto get = element_getter(sol.state);
    r.rate_ref = weighted(c, [&](int m, int n) { return emission_block(get, m, n, params, ref_ch); });
    r.rate_trans_direct = weighted(c, [&](int m, int n) {
      const Complex<Real> field = m == n ? Complex<Real>(static_cast<Real>(n) * std::norm(xi)) : Complex<Real>();
      return field + interference_block(get, m, n, params, out_ch, xi) + emission_block(get, m, n, params, out_ch);
    });
    r.transmittivity = transmittivity(r.rate_ref, flux);
    r.rate_trans = flux - r.rate_ref;
    r.conservation_error = std::abs(r.rate_ref + r.rate_trans_direct - flux) / flux;
    r.max_residual = sol.max_residual;
    r.max_condition = sol.max_condition;
  } else if (config.mode == SolverMode::Pulse) {
    if (photons == Real(0)) throw ZeroFlux();
    const auto ex = solve_pulse_exact(h);
    // excess integrals: the ground-state part of the emission operator is already subtracted
    const auto get_all = element_getter(ex.excess, Real(0));
    const auto get_pulse = element_getter(ex.during_pulse, pulse.duration());
    const Real counts_ref = weighted(c, [&](int m, int n) { return emission_block(get_all, m, n, params, ref_ch, Real(0)); });
    const Real counts_trans = weighted(c, [&](int m, int n) {
      const Complex<Real> field = m == n ? Complex<Real>(static_cast<Real>(n)) : Complex<Real>();
      return field + interference_block(get_pulse, m, n, params, out_ch, xi) +
             emission_block(get_all, m, n, params, out_ch, Real(0));
    });
    r.transmittivity = Real(1) - counts_ref / photons;
    r.rate_ref = counts_ref / pulse.duration();
    r.rate_trans = flux - r.rate_ref;
    r.rate_trans_direct = counts_trans / pulse.duration();
    r.conservation_error = std::abs(counts_ref + counts_trans - photons) / photons;
    r.max_condition = ex.max_condition;
  } else {
    const auto series = solve_time_domain(h, config);
    const Real window = series.end_time - series.start_time;
    const auto get_all = element_getter(series.integrated, window);
    const auto get_pulse = element_getter(series.integrated_pulse, pulse.duration());
    const auto get_last = element_getter(series.states.back());
    const Real counts_ref = weighted(c, [&](int m, int n) { return emission_block(get_all, m, n, params, ref_ch, window); });
    const Real counts_trans = weighted(c, [&](int m, int n) {
      const Complex<Real> field = m == n ? Complex<Real>(static_cast<Real>(n)) : Complex<Real>();
      return field + interference_block(get_pulse, m, n, params, out_ch, xi) +
             emission_block(get_all, m, n, params, out_ch, window);
    });
    const Real stored = weighted(c, [&](int m, int n) {
      const Complex<Real> diag = m == n ? Complex<Real>(2) : Complex<Real>();
      return (get_last(m, n, OpRef::plain(Op::Z1)) + get_last(m, n, OpRef::plain(Op::Z2)) + diag) / Real(2);
    });
    if (photons == Real(0)) throw ZeroFlux();
    r.transmittivity = Real(1) - counts_ref / photons;
    r.rate_ref = counts_ref / pulse.duration();
    r.rate_trans = flux - r.rate_ref;
    r.rate_trans_direct = counts_trans / pulse.duration();
    r.conservation_error = std::abs(counts_ref + counts_trans + stored - photons) / photons;
  }
  return r;
}

template <typename Real>
DirectionResult<Real> coherent_direction(const DeviceParams<Real>& params, Real nbar, const PulseSpec<Real>& pulse,
                                         const SolverConfig<Real>& config, FaultInjection fault, Direction d) {
  if (config.mode != SolverMode::SteadyState)
    throw ValidationError("coherent input is solved in steady-state mode only");
  const auto sol = solve_coherent(params, nbar, pulse, d, fault);
  const Real flux = nbar * pulse.omega / Real(2);
  DirectionResult<Real> r;
  r.rate_ref = reflected_rate(sol, params, d);
  r.rate_trans_direct = transmitted_rate_direct(sol, params, nbar, pulse, d);
  r.transmittivity = transmittivity(r.rate_ref, flux);
  r.rate_trans = flux - r.rate_ref;
  r.conservation_error = std::abs(r.rate_ref + r.rate_trans_direct - flux) / flux;
  r.max_residual = sol.residual;
  r.max_condition = sol.condition;
  return r;
}

}  // namespace detail

/// Solve one direction. The input's own direction field is ignored in favour of `d`.
template <typename Real>
DirectionResult<Real> simulate_direction(const DeviceParams<Real>& params, const InputState<Real>& input,
                                         const PulseSpec<Real>& pulse, const SolverConfig<Real>& config,
                                         Direction d, const BuildOptions<Real>& options = {}) {
  params.validate();
  pulse.validate();
  input.validate();
  config.validate();
  if (auto coh = std::get_if<Coherent<Real>>(&input.kind))
    return detail::coherent_direction(params, coh->nbar, pulse, config, options.fault, d);
  return detail::fock_direction(params, detail::fock_amplitudes(input), pulse, config, options, d);
}

/// Both directions of one parameter point and the rectification metrics.
template <typename Real>
ScatterResult<Real> simulate(const DeviceParams<Real>& params, const InputState<Real>& input,
                             const PulseSpec<Real>& pulse, const SolverConfig<Real>& config = {},
                             const BuildOptions<Real>& options = {}) {
  ScatterResult<Real> out;
  out.mode = config.mode;
  out.flux = mean_flux(input, pulse);
  out.fwd = simulate_direction(params, input, pulse, config, Direction::Left, options);
  out.bwd = simulate_direction(params, input, pulse, config, Direction::Right, options);
  out.t_fwd = out.fwd.transmittivity;
  out.t_bwd = out.bwd.transmittivity;
  try {
    const auto m = metrics(out.t_fwd, out.t_bwd);
    out.r1 = m.r1;
    out.r2 = m.r2;
    out.r3 = m.r3;
    out.r4 = m.r4;
  } catch (const BothBlocked& e) {
    out.r1 = static_cast<Real>(e.r1());
  }
  return out;
}

}  // namespace diode
