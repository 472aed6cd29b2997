#include <doctest.h>

#include "diode/steady_state.hpp"

using namespace diode;

namespace {
const PulseSpec<double> kPulse{0.01};
}

TEST_CASE("level structure") {
  const auto p = DeviceParams<double>::from_ratios(0.1, 0.3);
  BuildOptions<double> dense;
  dense.prune_by_excitation = false;
  const auto h = build_hierarchy(p, 2, Direction::Left, kPulse, dense);
  REQUIRE(h.levels.size() == 5);
  CHECK(h.levels[0].size() == 9);
  CHECK(h.levels[1].size() == 18);
  CHECK(h.levels[2].size() == 27);
  CHECK(h.levels[3].size() == 18);
  CHECK(h.levels[4].size() == 9);
  const auto pruned = build_hierarchy(p, 2, Direction::Left, kPulse);
  for (const auto& sys : pruned.levels)
    for (const auto& u : sys.unknowns) CHECK(u.q - u.p == lowering_count(u.op));
  CHECK_THROWS_AS(build_hierarchy(p, -1, Direction::Left, kPulse), ValidationError);
}

TEST_CASE("n = 0 yields a single ground-state level") {
  const auto h = build_hierarchy(DeviceParams<double>::from_ratios(0.2, 0.1), 0, Direction::Left, kPulse);
  REQUIRE(h.levels.size() == 1);
  const auto sol = solve_steady_fock(h);
  CHECK(std::abs(sol.state.at(0, 0, Op::Z1) + 1.0) < 1e-14);
  CHECK(std::abs(sol.state.at(0, 0, Op::Z2) + 1.0) < 1e-14);
  CHECK(std::abs(sol.state.at(0, 0, Op::Z1Z2) - 1.0) < 1e-14);
  CHECK(std::abs(sol.state.at(0, 0, Op::P1M2)) < 1e-14);
}

TEST_CASE("rotating frame removes all explicit time dependence") {
  for (double d : {0.0, 0.1, -0.4})
    for (double th : {0.1, 0.3, 0.5025}) {
      for (double dmu : {0.0, 0.02}) {
        auto p = DeviceParams<double>::from_ratios(d, th, dmu);
        for (auto dir : {Direction::Left, Direction::Right}) {
          CHECK(residual_time_dependence(build_hierarchy(p, 3, dir, kPulse)) < 1e-12);
        }
      }
    }
}

TEST_CASE("skipping the frame transformation leaves an O(1) time dependence") {
  BuildOptions<double> raw;
  raw.apply_frame = false;
  const auto p = DeviceParams<double>::from_ratios(0.1, 0.3);
  CHECK(residual_time_dependence(build_hierarchy(p, 1, Direction::Left, kPulse, raw)) > 0.1);
  // no detuning: nothing to remove
  const auto q = DeviceParams<double>::from_ratios(0.0, 0.3);
  CHECK(residual_time_dependence(build_hierarchy(q, 1, Direction::Left, kPulse, raw)) < 1e-12);
}

TEST_CASE("excitation selection rule: the dense hierarchy agrees with the pruned one") {
  BuildOptions<double> dense;
  dense.prune_by_excitation = false;
  for (auto dir : {Direction::Left, Direction::Right}) {
    const auto p = DeviceParams<double>::from_ratios(0.15, 0.27);
    const auto a = solve_steady_fock(build_hierarchy(p, 3, dir, kPulse, dense));
    const auto b = solve_steady_fock(build_hierarchy(p, 3, dir, kPulse));
    double forbidden = 0;
    double gap = 0;
    for (int m = 0; m <= 3; ++m)
      for (int n = 0; n <= 3; ++n)
        for (Op op : kAllOps) {
          const auto va = a.state.at(m, n, op);
          if (n - m != lowering_count(op)) forbidden = std::max(forbidden, std::abs(va));
          gap = std::max(gap, std::abs(va - b.state.at(m, n, op)));
        }
    CHECK(forbidden < 1e-12);
    CHECK(gap < 1e-12);
  }
}

TEST_CASE("truncation exactness: block (n, n) does not depend on the cutoff") {
  const auto p = DeviceParams<double>::from_ratios(-0.2, 0.41);
  const auto small = solve_steady_fock(build_hierarchy(p, 2, Direction::Left, kPulse));
  const auto large = solve_steady_fock(build_hierarchy(p, 4, Direction::Left, kPulse));
  double gap = 0;
  for (int m = 0; m <= 2; ++m)
    for (int n = 0; n <= 2; ++n)
      for (Op op : kAllOps) gap = std::max(gap, std::abs(small.state.at(m, n, op) - large.state.at(m, n, op)));
  CHECK(gap < 1e-12);
}

TEST_CASE("hierarchy state resolves adjoints and the identity") {
  HierarchyState<double> s(1);
  s.at(0, 1, Op::S1) = {0.3, -0.2};
  CHECK(s.value(1, 0, OpRef::adjoint(Op::S1)) == std::complex<double>(0.3, 0.2));
  CHECK(s.value(1, 1, OpRef::identity()) == 1.0);
  CHECK(s.value(0, 1, OpRef::identity()) == 0.0);
  CHECK(s.value(0, 0, OpRef::identity(), 7.0) == 7.0);
  CHECK_THROWS_AS(s.at(2, 0, Op::S1), std::out_of_range);
}
