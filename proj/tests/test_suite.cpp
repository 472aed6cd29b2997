#include <doctest.h>

#include "diode/suite.hpp"

using namespace diode;

TEST_CASE("consistency suite passes on the default points") {
  const auto report = run_consistency_suite(default_suite_points());
  CHECK(report.points.size() == 12);
  CHECK(report.checks.size() == 12 * 5);
  for (const auto& c : report.checks) {
    CAPTURE(c.point);
    CAPTURE(c.check);
    CAPTURE(c.value);
    CAPTURE(c.message);
    CHECK(c.passed);
  }
  const auto j = report.to_json();
  CHECK(j["passed"] == true);
  CHECK(j["checks"].size() == 60);
}

TEST_CASE("consistency suite catches a wrong coupling phase") {
  SuiteOptions o;
  o.fault = FaultInjection::FlipAtom1CouplingPhase;
  const std::vector<SuitePoint> pts{{0.1, 0.3, 1, 0.01}, {-0.2, 0.2, 2, 0.01}};
  const auto report = run_consistency_suite(pts, o);
  CHECK_FALSE(report.passed());
  int oracle_failures = 0;
  for (const auto& c : report.checks)
    if (c.check == "single_photon_oracle" && !c.passed) ++oracle_failures;
  CHECK(oracle_failures == 2);
}

TEST_CASE("a failing point is recorded instead of aborting the suite") {
  const std::vector<SuitePoint> pts{{0.1, 0.3, 1, -1.0}};  // negative bandwidth
  const auto report = run_consistency_suite(pts);
  CHECK_FALSE(report.passed());
  for (const auto& c : report.checks) {
    CHECK_FALSE(c.passed);
    CHECK_FALSE(c.message.empty());
  }
}
