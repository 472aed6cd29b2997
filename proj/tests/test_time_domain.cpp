#include <doctest.h>

#include "diode/simulate.hpp"
#include "support/master_equation.hpp"

using namespace diode;

TEST_CASE("late window of the time series agrees with the steady solve (Fock 1, Omega = 0.01)") {
  const auto p = DeviceParams<double>::from_ratios(0.1, 0.3);
  const PulseSpec<double> pulse{0.01};
  const auto h = build_hierarchy(p, 1, Direction::Left, pulse);
  const auto steady = solve_steady_fock(h);
  const SolverConfig<double> cfg;
  const auto series = solve_time_domain(h, cfg);
  CHECK(series.times.size() == 101);
  CHECK(series.times.back() == doctest::Approx(pulse.duration()));
  CHECK(std::abs(series.states.back().at(1, 1, Op::Z1) - steady.state.at(1, 1, Op::Z1)) < 1e-6);
  CHECK(late_window_deviation(series, steady.state, pulse.duration(), cfg.settle_margin) < 10 * cfg.rel_tol);
}

TEST_CASE("steady/time agreement for n <= 5 in both directions") {
  const PulseSpec<double> pulse{0.01};
  for (int n = 1; n <= 5; ++n)
    for (auto dir : {Direction::Left, Direction::Right}) {
      const auto p = DeviceParams<double>::from_ratios(0.2, 0.2);
      const auto h = build_hierarchy(p, n, dir, pulse);
      const auto series = solve_time_domain(h, SolverConfig<double>{});
      CHECK(late_window_deviation(series, solve_steady_fock(h).state, pulse.duration(), 0.25) < 1e-6);
    }
}

TEST_CASE("count-based transmission matches the integrated master equation") {
  const auto p = DeviceParams<double>::from_ratios(0.1, 0.3);
  const PulseSpec<double> pulse{0.5};
  SolverConfig<double> cfg;
  cfg.mode = SolverMode::TimeDomain;
  cfg.tail_time = 40;
  for (int n : {1, 2}) {
    const auto r = simulate_direction(p, InputState<double>::fock(n), pulse, cfg, Direction::Left);
    const oracle::Device dev{1.0, p.delta, p.theta};
    const auto Q = oracle::FockMasterEquation(dev, n, true, pulse.amplitude())
                       .integrate_diagonal(pulse.duration(), pulse.duration() + cfg.tail_time, pulse.duration() / 800);
    const auto Lb = dev.Lb();
    const double reflected = std::real((Lb.adjoint() * Lb * Q).trace());
    CHECK(r.transmittivity == doctest::Approx(1.0 - reflected / n).epsilon(1e-7));
    CHECK(r.conservation_error < 1e-8);
  }
}

TEST_CASE("excitation left in the atoms closes the photon budget without a tail") {
  const auto p = DeviceParams<double>::from_ratios(0.3, 0.15);
  SolverConfig<double> cfg;
  cfg.mode = SolverMode::TimeDomain;
  const auto r = simulate_direction(p, InputState<double>::fock(2), PulseSpec<double>{1.0}, cfg, Direction::Right);
  CHECK(r.conservation_error < 1e-8);
}

TEST_CASE("integrator failure is reported with the failing time") {
  const auto h = build_hierarchy(DeviceParams<double>::from_ratios(0.1, 0.3), 1, Direction::Left,
                                 PulseSpec<double>{0.01});
  SolverConfig<double> cfg;
  cfg.max_steps = 10;
  try {
    solve_time_domain(h, cfg);
    FAIL("expected StepFailure");
  } catch (const StepFailure& e) {
    CHECK(e.time() >= 0.0);
    CHECK(e.time() < 200.0);
  }
}

TEST_CASE("solver config validation") {
  SolverConfig<double> cfg;
  cfg.settle_margin = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.settle_margin = 0.6;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
  cfg.settle_margin = 0.5;
  CHECK_NOTHROW(cfg.validate());
  cfg.rel_tol = 0;
  CHECK_THROWS_AS(cfg.validate(), ValidationError);
}

TEST_CASE("delta_mu and the envelope delay act as small perturbations") {
  SolverConfig<double> cfg;
  cfg.mode = SolverMode::TimeDomain;
  cfg.tail_time = 40;
  const PulseSpec<double> pulse{0.5};
  const auto base = simulate(DeviceParams<double>::from_ratios(0.2, 0.3), InputState<double>::fock(1), pulse, cfg);
  CHECK(base.conservation_error() < 1e-8);
  auto p = DeviceParams<double>::from_ratios(0.2, 0.3, 4e-4);
  p.mu_envelope_delay = true;
  const auto shifted = simulate(p, InputState<double>::fock(1), pulse, cfg);
  // field couplings at theta - delta_mu no longer match the dissipator, so the budget is only O(delta_mu)
  CHECK(shifted.conservation_error() < 5e-3);
  CHECK(std::abs(shifted.t_fwd - base.t_fwd) < 5e-3);
  CHECK(std::abs(shifted.t_bwd - base.t_bwd) < 5e-3);
}
