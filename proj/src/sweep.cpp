#include "diode/sweep.hpp"

#include <cmath>

#include "diode/parallel.hpp"

namespace diode {

namespace {

void require_axis(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw ValidationError(std::string("axis '") + name + "' is empty");
  for (double v : axis)
    if (!std::isfinite(v)) throw ValidationError(std::string("axis '") + name + "' holds a non-finite value");
}

InputState<double> input_state(const SweepPoint& p) {
  if (p.input == InputKind::Coherent) return InputState<double>::coherent(p.photons);
  return InputState<double>::fock(static_cast<int>(std::lround(p.photons)));
}

}  // namespace

std::size_t SweepGrid::size() const {
  return photons.size() * omega_over_gamma.size() * theta_over_2pi.size() * delta_over_gamma.size();
}

void SweepGrid::validate() const {
  require_axis(photons, input == InputKind::Fock ? "n" : "nbar");
  require_axis(omega_over_gamma, "omega-ratio");
  require_axis(delta_over_gamma, "delta-ratio");
  require_axis(theta_over_2pi, "theta");
  for (double v : photons) {
    if (v < 0) throw ValidationError("photon numbers must be nonnegative");
    if (input == InputKind::Fock && v != std::floor(v)) throw ValidationError("Fock photon numbers must be integers");
  }
  for (double v : omega_over_gamma)
    if (!(v > 0)) throw ValidationError("omega-ratio values must be positive");
  if (!std::isfinite(delta_mu)) throw ValidationError("delta-mu must be finite");
  if (input == InputKind::Coherent && solver.mode != SolverMode::SteadyState)
    throw ValidationError("coherent input is solved in steady-state mode only");
  solver.validate();
}

SweepPoint grid_point(const SweepGrid& grid, std::size_t index) {
  const std::size_t nd = grid.delta_over_gamma.size();
  const std::size_t nt = grid.theta_over_2pi.size();
  const std::size_t no = grid.omega_over_gamma.size();
  SweepPoint p;
  p.input = grid.input;
  p.delta_over_gamma = grid.delta_over_gamma[index % nd];
  index /= nd;
  p.theta_over_2pi = grid.theta_over_2pi[index % nt];
  index /= nt;
  p.omega_over_gamma = grid.omega_over_gamma[index % no];
  index /= no;
  p.photons = grid.photons.at(index);
  return p;
}

SweepRow run_point(const SweepGrid& grid, const SweepPoint& point, std::size_t index,
                   const BuildOptions<double>& options) {
  SweepRow row;
  row.index = index;
  row.point = point;
  row.mode = grid.solver.mode;
  row.flux_over_gamma = point.photons * point.omega_over_gamma / 2;
  try {
    auto params = DeviceParams<double>::from_ratios(point.delta_over_gamma, point.theta_over_2pi, grid.delta_mu);
    params.mu_envelope_delay = grid.mu_envelope_delay;
    const PulseSpec<double> pulse{point.omega_over_gamma};
    row.result = simulate(params, input_state(point), pulse, grid.solver, options);
    const auto& r = *row.result;
    row.converged = std::isfinite(r.t_fwd) && std::isfinite(r.t_bwd) && r.max_residual() <= kConvergedResidual &&
                    r.conservation_error() <= kConvergedConservation;
    if (!row.converged) row.error = "solver diagnostics above convergence thresholds";
  } catch (const std::exception& e) {
    row.result.reset();
    row.converged = false;
    row.error = e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep(const SweepGrid& grid, int workers, const BuildOptions<double>& options) {
  grid.validate();
  std::vector<SweepRow> rows(grid.size());
  parallel_for(rows.size(), workers > 0 ? workers : default_workers(),
               [&](std::size_t i) { rows[i] = run_point(grid, grid_point(grid, i), i, options); });
  return rows;
}

}  // namespace diode
