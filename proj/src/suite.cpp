#include "diode/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "diode/parallel.hpp"
#include "diode/simulate.hpp"
#include "diode/transfer_oracle.hpp"

namespace diode {

namespace {

using Check = std::function<double(const SuitePoint&, const SuiteOptions&)>;

BuildOptions<double> build_options(const SuiteOptions& o) {
  BuildOptions<double> b;
  b.fault = o.fault;
  return b;
}

double conservation(const SuitePoint& pt, const SuiteOptions& o) {
  const auto p = DeviceParams<double>::from_ratios(pt.delta_over_gamma, pt.theta_over_2pi);
  const auto r = simulate(p, InputState<double>::fock(pt.n), PulseSpec<double>{pt.omega_over_gamma}, {}, build_options(o));
  return r.conservation_error();
}

double zero_detuning_symmetry(const SuitePoint& pt, const SuiteOptions& o) {
  const auto p = DeviceParams<double>::from_ratios(0.0, pt.theta_over_2pi);
  const auto r = simulate(p, InputState<double>::fock(pt.n), PulseSpec<double>{pt.omega_over_gamma}, {}, build_options(o));
  return std::abs(r.t_fwd - r.t_bwd);
}

double steady_time_agreement(const SuitePoint& pt, const SuiteOptions& o) {
  const auto p = DeviceParams<double>::from_ratios(pt.delta_over_gamma, pt.theta_over_2pi);
  const PulseSpec<double> pulse{pt.omega_over_gamma};
  SolverConfig<double> cfg;
  cfg.mode = SolverMode::TimeDomain;
  cfg.rel_tol = o.rel_tol;
  cfg.abs_tol = o.rel_tol * 1e-2;
  double worst = 0;
  for (Direction d : {Direction::Left, Direction::Right}) {
    const auto h = build_hierarchy(p, pt.n, d, pulse, build_options(o));
    const auto steady = solve_steady_fock(h);
    const auto series = solve_time_domain(h, cfg);
    worst = std::max(worst, late_window_deviation(series, steady.state, pulse.duration(), cfg.settle_margin));
  }
  return worst;
}

// (|0> + i|n>)/sqrt(2) must reflect exactly half of |n>, and the dense hierarchy must show no
// cross-Fock contribution to any output intensity.
double superposition_equivalence(const SuitePoint& pt, const SuiteOptions& o) {
  const auto p = DeviceParams<double>::from_ratios(pt.delta_over_gamma, pt.theta_over_2pi);
  const PulseSpec<double> pulse{pt.omega_over_gamma};
  std::vector<Complex<double>> c(static_cast<std::size_t>(pt.n) + 1);
  c.front() = std::sqrt(0.5);
  c.back() = Complex<double>(0, std::sqrt(0.5));
  const auto opts = build_options(o);
  const auto sup = simulate_direction(p, InputState<double>::superposition(c), pulse, {}, Direction::Left, opts);
  const auto one = simulate_direction(p, InputState<double>::fock(pt.n), pulse, {}, Direction::Left, opts);
  double worst = std::abs(sup.rate_ref - 0.5 * one.rate_ref) / std::max(std::abs(one.rate_ref), 1e-300);

  auto dense = opts;
  dense.prune_by_excitation = false;
  const auto sol = solve_steady_fock(build_hierarchy(p, pt.n, Direction::Left, pulse, dense));
  const auto get = element_getter(sol.state);
  const double scale = pulse.omega;
  for (int m = 0; m <= pt.n; ++m)
    for (int n = 0; n <= pt.n; ++n) {
      if (m == n) continue;
      for (Channel ch : {Channel::A, Channel::B})
        worst = std::max(worst, std::abs(emission_block(get, m, n, p, ch)) / scale);
    }
  return worst;
}

// Single-photon counts from the time-domain hierarchy against the spectrum-weighted scattering
// amplitudes, both directions.
double single_photon_oracle(const SuitePoint& pt, const SuiteOptions& o) {
  const auto p = DeviceParams<double>::from_ratios(pt.delta_over_gamma, pt.theta_over_2pi);
  const PulseSpec<double> pulse{pt.omega_over_gamma};
  SolverConfig<double> cfg;
  cfg.mode = SolverMode::TimeDomain;
  cfg.tail_time = o.oracle_tail_time;
  cfg.samples = 2;
  const auto r = simulate(p, InputState<double>::fock(1), pulse, cfg, build_options(o));
  const auto ref = finite_bandwidth_transmission(p, pulse.omega);
  return std::max(std::abs(r.t_fwd - ref.fwd), std::abs(r.t_bwd - ref.bwd));
}

struct CheckSpec {
  const char* name;
  Check fn;
  double SuiteOptions::*tol;
  double scale;
};

const std::vector<CheckSpec>& check_specs() {
  static const std::vector<CheckSpec> specs{
      {"conservation", conservation, &SuiteOptions::conservation_tol, 1},
      {"zero_detuning_symmetry", zero_detuning_symmetry, &SuiteOptions::symmetry_tol, 1},
      {"steady_time_agreement", steady_time_agreement, &SuiteOptions::rel_tol, 10},
      {"superposition_equivalence", superposition_equivalence, &SuiteOptions::superposition_tol, 1},
      {"single_photon_oracle", single_photon_oracle, &SuiteOptions::oracle_tol, 1},
  };
  return specs;
}

}  // namespace

bool SuiteReport::passed() const { return failures() == 0; }

std::size_t SuiteReport::failures() const {
  return static_cast<std::size_t>(std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
}

nlohmann::json SuiteReport::to_json() const {
  nlohmann::json j;
  j["passed"] = passed();
  j["failures"] = failures();
  j["points"] = nlohmann::json::array();
  for (const auto& p : points)
    j["points"].push_back({{"delta_over_gamma", p.delta_over_gamma},
                           {"theta_over_2pi", p.theta_over_2pi},
                           {"n", p.n},
                           {"omega_over_gamma", p.omega_over_gamma}});
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json e{{"point", c.point}, {"check", c.check}, {"passed", c.passed}, {"tolerance", c.tolerance}};
    e["value"] = std::isfinite(c.value) ? nlohmann::json(c.value) : nlohmann::json(nullptr);
    if (!c.message.empty()) e["message"] = c.message;
    j["checks"].push_back(std::move(e));
  }
  return j;
}

// Away from theta/2pi = 0.5 so the subradiant transient dies well inside the late window.
std::vector<SuitePoint> default_suite_points() {
  return {
      {0.1, 0.3, 1, 0.01},    {0.1, 0.3, 2, 0.01},   {-0.2, 0.2, 1, 0.01},  {-0.2, 0.2, 3, 0.01},
      {0.25, 0.33, 2, 0.01},  {0.05, 0.68, 1, 0.01}, {0.3, 0.75, 2, 0.01},  {-0.1, 0.88, 1, 0.01},
      {0.15, 0.15, 3, 0.01},  {-0.35, 0.35, 2, 0.01}, {0.4, 0.7, 1, 0.01},  {0.08, 0.25, 2, 0.02},
  };
}

SuiteReport run_consistency_suite(const std::vector<SuitePoint>& points, const SuiteOptions& options) {
  const auto& specs = check_specs();
  SuiteReport report;
  report.points = points;
  report.checks.resize(points.size() * specs.size());
  const int workers = options.workers > 0 ? options.workers : default_workers();
  parallel_for(report.checks.size(), workers, [&](std::size_t k) {
    const std::size_t i = k / specs.size();
    const auto& spec = specs[k % specs.size()];
    CheckResult& c = report.checks[k];
    c.point = i;
    c.check = spec.name;
    c.tolerance = options.*spec.tol * spec.scale;
    try {
      c.value = spec.fn(points[i], options);
      c.passed = std::isfinite(c.value) && c.value <= c.tolerance;
    } catch (const std::exception& e) {
      c.value = std::nan("");
      c.passed = false;
      c.message = e.what();
    }
  });
  return report;
}

}  // namespace diode
