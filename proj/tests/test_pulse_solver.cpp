#include <doctest.h>

#include "diode/simulate.hpp"
#include "diode/transfer_oracle.hpp"

using namespace diode;

namespace {

SolverConfig<double> pulse_mode() {
  SolverConfig<double> c;
  c.mode = SolverMode::Pulse;
  return c;
}

}  // namespace

TEST_CASE("closed-form pulse propagation matches adaptive integration") {
  struct Case {
    double delta, theta;
    int n;
    double omega, tail;
  };
  for (const Case& k : {Case{0.1, 0.3, 1, 0.01, 400}, Case{-0.2, 0.2, 3, 0.05, 200}, Case{0.13, 0.49, 2, 0.01, 3000},
                        Case{0.3, 0.8, 2, 0.1, 200}}) {
    CAPTURE(k.delta);
    CAPTURE(k.theta);
    CAPTURE(k.n);
    const auto p = DeviceParams<double>::from_ratios(k.delta, k.theta);
    SolverConfig<double> time;
    time.mode = SolverMode::TimeDomain;
    time.tail_time = k.tail;
    time.samples = 2;
    const auto a = simulate(p, InputState<double>::fock(k.n), PulseSpec<double>{k.omega}, time);
    const auto b = simulate(p, InputState<double>::fock(k.n), PulseSpec<double>{k.omega}, pulse_mode());
    CHECK(b.t_fwd == doctest::Approx(a.t_fwd).epsilon(1e-7));
    CHECK(b.t_bwd == doctest::Approx(a.t_bwd).epsilon(1e-7));
    CHECK(b.conservation_error() < 1e-10);
  }
}

TEST_CASE("single-photon pulse counts match the spectrum-weighted scattering amplitudes") {
  for (double d : {-0.3, 0.1, 0.25})
    for (double th : {0.15, 0.3, 0.45, 0.7})
      for (double omega : {0.05, 0.5}) {
        CAPTURE(d);
        CAPTURE(th);
        CAPTURE(omega);
        const auto p = DeviceParams<double>::from_ratios(d, th);
        const auto r = simulate(p, InputState<double>::fock(1), PulseSpec<double>{omega}, pulse_mode());
        const auto ref = finite_bandwidth_transmission(p, omega, 200.0);
        CHECK(std::abs(r.t_fwd - ref.fwd) < 1e-5);
        CHECK(std::abs(r.t_bwd - ref.bwd) < 1e-5);
      }
}

TEST_CASE("finite pulses keep transmittivities physical where the stationary limit does not") {
  // relaxation near theta/2pi = 1/2 is slower than the pulse: the stationary solution is not reached
  const auto p = DeviceParams<double>::from_ratios(0.13, 0.49);
  const PulseSpec<double> pulse{0.01};
  const auto steady = simulate(p, InputState<double>::fock(4), pulse);
  CHECK(steady.t_fwd > 1.5);
  for (int n = 1; n <= 5; ++n) {
    const auto r = simulate(p, InputState<double>::fock(n), pulse, pulse_mode());
    CHECK(r.t_fwd >= -1e-9);
    CHECK(r.t_fwd <= 1 + 1e-9);
    CHECK(r.t_bwd >= -1e-9);
    CHECK(r.t_bwd <= 1 + 1e-9);
  }
}

TEST_CASE("single photons are reciprocal for any pulse") {
  for (double omega : {1e-3, 0.01, 0.3})
    for (double th : {0.1, 0.49, 0.8}) {
      const auto r = simulate(DeviceParams<double>::from_ratios(0.2, th), InputState<double>::fock(1),
                              PulseSpec<double>{omega}, pulse_mode());
      CHECK(std::abs(r.t_fwd - r.t_bwd) < 1e-9);
    }
}

TEST_CASE("pulse mode refuses inputs whose counts are not finite") {
  const PulseSpec<double> pulse{0.01};
  // exact dark state: excitation is trapped forever
  CHECK_THROWS_AS(simulate(DeviceParams<double>::from_ratios(0.0, 0.5), InputState<double>::fock(1), pulse, pulse_mode()),
                  std::runtime_error);
  CHECK_THROWS_AS(simulate(DeviceParams<double>::from_ratios(0.3, 0.7, 0.003), InputState<double>::fock(1), pulse,
                           pulse_mode()),
                  ValidationError);
  CHECK_THROWS_AS(simulate(DeviceParams<double>::from_ratios(0.3, 0.7), InputState<double>::coherent(1.0), pulse,
                           pulse_mode()),
                  ValidationError);
}

TEST_CASE("superposition inputs in pulse mode follow the Fock mixture") {
  const auto p = DeviceParams<double>::from_ratios(0.1, 0.3);
  const PulseSpec<double> pulse{0.05};
  const double h = std::sqrt(0.5);
  const auto sup = simulate_direction(p, InputState<double>::superposition({0.0, h, h}), pulse, pulse_mode(), Direction::Left);
  const auto one = simulate_direction(p, InputState<double>::fock(1), pulse, pulse_mode(), Direction::Left);
  const auto two = simulate_direction(p, InputState<double>::fock(2), pulse, pulse_mode(), Direction::Left);
  CHECK(sup.rate_ref == doctest::Approx(0.5 * (one.rate_ref + two.rate_ref)).epsilon(1e-10));
}
