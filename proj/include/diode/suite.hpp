// suite.hpp - cross-checks run over a set of parameter points.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "diode/operators.hpp"

namespace diode {

struct SuitePoint {
  double delta_over_gamma{0.1};
  double theta_over_2pi{0.3};
  int n{1};
  double omega_over_gamma{0.01};
};

struct SuiteOptions {
  FaultInjection fault{FaultInjection::None};
  int workers{0};  // 0: DIODE_WORKERS or hardware concurrency

  double conservation_tol{1e-6};
  double symmetry_tol{1e-8};
  double rel_tol{1e-8};           // time-domain tolerance; agreement threshold is 10 * rel_tol
  double superposition_tol{1e-8};
  double oracle_tol{0.02};
  double oracle_tail_time{400};   // lets subradiant light leave the device before counting
};

struct CheckResult {
  std::size_t point{0};
  std::string check;
  bool passed{false};
  double value{0};
  double tolerance{0};
  std::string message;  // non-empty when the check could not run
};

struct SuiteReport {
  std::vector<SuitePoint> points;
  std::vector<CheckResult> checks;

  bool passed() const;
  std::size_t failures() const;
  nlohmann::json to_json() const;
};

std::vector<SuitePoint> default_suite_points();

/// Runs every check on every point. Never throws for a failing check; failures are recorded.
SuiteReport run_consistency_suite(const std::vector<SuitePoint>& points, const SuiteOptions& options = {});

}  // namespace diode
