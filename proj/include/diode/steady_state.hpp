// steady_state.hpp - level-by-level steady state of the hierarchy under a flat drive.

#pragma once

#include <limits>
#include <stdexcept>
#include <string>

#include "diode/hierarchy.hpp"

namespace diode {

/// Level matrix is numerically singular (condition estimate above the limit).
class SingularLevel : public std::runtime_error {
 public:
  SingularLevel(int level, double condition)
      : std::runtime_error("level " + std::to_string(level) + " is singular (condition estimate " +
                           std::to_string(condition) + ")"),
        level_(level),
        condition_(condition) {}
  int level() const { return level_; }
  double condition() const { return condition_; }

 private:
  int level_;
  double condition_;
};

template <typename Real = double>
struct LinearSolveInfo {
  Real residual{0};   // ||M x + N conj(x) + b|| / max(||b||, 1)
  Real condition{0};  // 2-norm condition number (LU estimate above kExactConditionLimit rows)
};

inline constexpr Eigen::Index kExactConditionLimit = 128;

/// Solve M x + N conj(x) + b = 0 for complex x through the equivalent real 2n x 2n system.
template <typename Real>
VectorXc<Real> solve_real_linear(const MatrixXc<Real>& M, const MatrixXc<Real>& N, const VectorXc<Real>& b,
                                 LinearSolveInfo<Real>* info = nullptr, int level = 0,
                                 Real condition_limit = Real(1e12)) {
  const Eigen::Index n = M.rows();
  MatrixX<Real> A(2 * n, 2 * n);
  A.topLeftCorner(n, n) = M.real() + N.real();
  A.topRightCorner(n, n) = -M.imag() + N.imag();
  A.bottomLeftCorner(n, n) = M.imag() + N.imag();
  A.bottomRightCorner(n, n) = M.real() - N.real();
  VectorX<Real> rhs(2 * n);
  rhs.head(n) = -b.real();
  rhs.tail(n) = -b.imag();

  Eigen::PartialPivLU<MatrixX<Real>> lu(A);
  Real condition;
  if (A.rows() <= kExactConditionLimit) {
    // the LU estimate can miss an exact null direction; small systems get the 2-norm value
    const auto sv = Eigen::JacobiSVD<MatrixX<Real>>(A).singularValues();
    condition = sv(sv.size() - 1) > Real(0) ? sv(0) / sv(sv.size() - 1) : std::numeric_limits<Real>::infinity();
  } else {
    const Real rcond = lu.rcond();
    condition = rcond > Real(0) ? Real(1) / rcond : std::numeric_limits<Real>::infinity();
  }
  if (!(condition <= condition_limit)) throw SingularLevel(level, static_cast<double>(condition));
  const VectorX<Real> y = lu.solve(rhs);

  VectorXc<Real> x(n);
  for (Eigen::Index k = 0; k < n; ++k) x(k) = Complex<Real>(y(k), y(n + k));
  if (info) {
    const VectorXc<Real> r = M * x + N * x.conjugate() + b;
    info->residual = r.norm() / std::max(b.norm(), Real(1));
    info->condition = condition;
  }
  return x;
}

template <typename Real = double>
struct SteadySolution {
  HierarchyState<Real> state;
  Real max_residual{0};
  Real max_condition{0};
};

namespace detail {

template <typename Real>
VectorXc<Real> gather(const HierarchyState<Real>& state, const std::vector<Unknown>& u) {
  VectorXc<Real> x(static_cast<Eigen::Index>(u.size()));
  for (std::size_t k = 0; k < u.size(); ++k) x(static_cast<Eigen::Index>(k)) = state.at(u[k].p, u[k].q, u[k].op);
  return x;
}

template <typename Real>
void scatter(HierarchyState<Real>& state, const std::vector<Unknown>& u, const VectorXc<Real>& x) {
  for (std::size_t k = 0; k < u.size(); ++k) state.at(u[k].p, u[k].q, u[k].op) = x(static_cast<Eigen::Index>(k));
}

/// f + sum_g env_g (C_g y + D_g conj(y) + c_g) at time t.
template <typename Real>
VectorXc<Real> level_source(const LevelSystem<Real>& sys, const LevelOperators<Real>& ops,
                            const VectorXc<Real>& lower, Real t) {
  VectorXc<Real> b = ops.source;
  for (const auto& g : ops.couplings) {
    const Complex<Real> env = sys.envelope_factor(g, t);
    if (env == Complex<Real>()) continue;
    VectorXc<Real> drive = g.constant;
    if (lower.size() > 0) drive += g.lower * lower + g.lower_conj * lower.conjugate();
    b += env * drive;
  }
  return b;
}

}  // namespace detail

/// Steady state inside the flat part of the pulse. Requires the rotating frame to be applied.
template <typename Real>
SteadySolution<Real> solve_steady_fock(const Hierarchy<Real>& h, Real condition_limit = Real(1e12)) {
  SteadySolution<Real> out{HierarchyState<Real>(h.n_max)};
  const Real t_mid = h.pulse.duration() / Real(2);
  for (const auto& sys : h.levels) {
    if (!sys.frame_applied) throw std::logic_error("steady state requires the rotating-frame transformation");
    const auto ops = sys.operators(t_mid);
    const VectorXc<Real> lower = detail::gather(out.state, sys.lower_unknowns);
    const VectorXc<Real> b = detail::level_source(sys, ops, lower, t_mid);
    LinearSolveInfo<Real> info;
    const VectorXc<Real> x = solve_real_linear(ops.same, ops.same_conj, b, &info, sys.level, condition_limit);
    detail::scatter(out.state, sys.unknowns, x);
    out.max_residual = std::max(out.max_residual, info.residual);
    out.max_condition = std::max(out.max_condition, info.condition);
  }
  return out;
}

}  // namespace diode
