// pulse_solver.hpp - closed-form propagation of the hierarchy through a piecewise-constant envelope.
//
// Between switch times every level obeys r' = A r + c with constant A, so each segment is one
// matrix exponential. After the last switch the atoms decay freely and the remaining emission is
// integrated to infinity in closed form.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "diode/time_domain.hpp"

namespace diode {

template <typename Real = double>
struct PulseIntegrals {
  HierarchyState<Real> excess;        // integral of (x - ground) over [start, infinity)
  HierarchyState<Real> during_pulse;  // integral of x over [start, pulse duration]
  HierarchyState<Real> last_switch;   // x when the envelope switches off for good
  Real start_time{0};
  Real end_time{0};     // last switch time
  Real max_condition{0};
};

namespace detail {

/// Adds the real form of M x + N conj(x) to A, with r = [Re x; Im x] over `dim` complex unknowns.
template <typename Real>
void add_real_block(MatrixX<Real>& A, Eigen::Index dim, Eigen::Index row, Eigen::Index col, const MatrixXc<Real>& M,
                    const MatrixXc<Real>& N, Complex<Real> scale = Complex<Real>(1)) {
  const MatrixXc<Real> m = scale * M;
  const MatrixXc<Real> c = scale * N;
  const auto nr = m.rows();
  const auto nc = m.cols();
  A.block(row, col, nr, nc) += m.real() + c.real();
  A.block(row, dim + col, nr, nc) += -m.imag() + c.imag();
  A.block(dim + row, col, nr, nc) += m.imag() + c.imag();
  A.block(dim + row, dim + col, nr, nc) += m.real() - c.real();
}

template <typename Real>
void add_real_vector(VectorX<Real>& v, Eigen::Index dim, Eigen::Index row, const VectorXc<Real>& b,
                     Complex<Real> scale = Complex<Real>(1)) {
  const VectorXc<Real> s = scale * b;
  v.segment(row, s.size()) += s.real();
  v.segment(dim + row, s.size()) += s.imag();
}

template <typename Real>
struct Segment {
  VectorX<Real> end;
  VectorX<Real> integral;
};

/// r(tau) and the integral of r over [0, tau] for r' = A r + c.
template <typename Real>
Segment<Real> propagate(const MatrixX<Real>& A, const VectorX<Real>& c, const VectorX<Real>& r0, Real tau,
                        Real& condition) {
  const Eigen::Index d = A.rows();
  Eigen::PartialPivLU<MatrixX<Real>> lu(A);
  const Real rcond = lu.rcond();
  condition = std::max(condition, rcond > Real(0) ? Real(1) / rcond : std::numeric_limits<Real>::infinity());
  if (rcond > Real(1e-12)) {
    const VectorX<Real> rs = lu.solve(-c);
    const MatrixX<Real> E = (A * tau).exp();
    const VectorX<Real> dev = r0 - rs;
    const VectorX<Real> moved = E * dev;
    return {rs + moved, tau * rs + lu.solve(VectorX<Real>(moved - dev))};
  }
  // singular generator: exponential of the augmented block [[A, c, 0], [0, 0, 0], [I, 0, 0]]
  MatrixX<Real> K = MatrixX<Real>::Zero(2 * (d + 1), 2 * (d + 1));
  K.topLeftCorner(d, d) = A;
  K.block(0, d, d, 1) = c;
  K.block(d + 1, 0, d + 1, d + 1).setIdentity();
  const MatrixX<Real> E = (K * tau).exp();
  VectorX<Real> z0(d + 1);
  z0.head(d) = r0;
  z0(d) = Real(1);
  return {(E.topLeftCorner(d + 1, d + 1) * z0).head(d), (E.bottomLeftCorner(d + 1, d + 1) * z0).head(d)};
}

}  // namespace detail

template <typename Real>
PulseIntegrals<Real> solve_pulse_exact(const Hierarchy<Real>& h) {
  // with delta_mu the undriven atoms settle away from the ground state and emit forever
  if (h.params.delta_mu != Real(0)) throw ValidationError("pulse mode requires delta_mu = 0");
  const int L = static_cast<int>(h.levels.size());
  std::vector<LevelOperators<Real>> ops;
  std::vector<Eigen::Index> offset(L + 1, 0);
  for (int s = 0; s < L; ++s) {
    detail::require_static(h.levels[s]);
    ops.push_back(h.levels[s].operators(Real(0)));
    offset[s + 1] = offset[s] + h.levels[s].size();
  }
  const Eigen::Index n = offset[L];
  const Real T = h.pulse.duration();
  const Real mu = L > 0 ? h.levels[0].mu : Real(0);
  const Real start = -std::abs(mu);

  std::vector<Real> switches{start};
  for (int r = -1; r <= 1; ++r)
    for (Real edge : {Real(0), T}) switches.push_back(edge - static_cast<Real>(r) * mu);
  std::sort(switches.begin(), switches.end());
  switches.erase(std::unique(switches.begin(), switches.end()), switches.end());
  switches.erase(std::remove_if(switches.begin(), switches.end(), [&](Real t) { return t < start; }), switches.end());

  // generator with the envelope factors frozen at time t
  auto generator = [&](Real t, MatrixX<Real>& A, VectorX<Real>& c) {
    A = MatrixX<Real>::Zero(2 * n, 2 * n);
    c = VectorX<Real>::Zero(2 * n);
    for (int s = 0; s < L; ++s) {
      detail::add_real_block(A, n, offset[s], offset[s], ops[s].same, ops[s].same_conj);
      detail::add_real_vector(c, n, offset[s], ops[s].source);
      for (const auto& g : ops[s].couplings) {
        const Complex<Real> env = h.levels[s].envelope_factor(g, t);
        if (env == Complex<Real>()) continue;
        if (s > 0) detail::add_real_block(A, n, offset[s], offset[s - 1], g.lower, g.lower_conj, env);
        detail::add_real_vector(c, n, offset[s], g.constant, env);
      }
    }
  };
  auto to_state = [&](const VectorX<Real>& r) {
    HierarchyState<Real> st(h.n_max);
    for (int s = 0; s < L; ++s) {
      const auto sz = h.levels[s].size();
      VectorXc<Real> x(sz);
      for (int k = 0; k < sz; ++k) x(k) = Complex<Real>(r(offset[s] + k), r(n + offset[s] + k));
      detail::scatter(st, h.levels[s].unknowns, x);
    }
    return st;
  };

  const HierarchyState<Real> ground_state = detail::ground_state<Real>(h.n_max);
  VectorX<Real> ground(2 * n);
  for (int s = 0; s < L; ++s) {
    const VectorXc<Real> g = detail::gather(ground_state, h.levels[s].unknowns);
    ground.segment(offset[s], g.size()) = g.real();
    ground.segment(n + offset[s], g.size()) = g.imag();
  }

  PulseIntegrals<Real> out;
  out.start_time = start;
  out.end_time = switches.back();
  VectorX<Real> r = ground;
  VectorX<Real> excess = VectorX<Real>::Zero(2 * n);
  VectorX<Real> in_pulse = VectorX<Real>::Zero(2 * n);
  MatrixX<Real> A;
  VectorX<Real> c;
  for (std::size_t k = 0; k + 1 < switches.size(); ++k) {
    const Real a = switches[k];
    const Real b = switches[k + 1];
    generator((a + b) / Real(2), A, c);
    const auto seg = detail::propagate(A, c, r, b - a, out.max_condition);
    excess += seg.integral - (b - a) * ground;
    if (b <= T) in_pulse += seg.integral;
    r = seg.end;
  }
  out.last_switch = to_state(r);

  // free decay back to the ground state
  generator(out.end_time + Real(1), A, c);
  Eigen::PartialPivLU<MatrixX<Real>> lu(A);
  const Real rcond = lu.rcond();
  const Real condition = rcond > Real(0) ? Real(1) / rcond : std::numeric_limits<Real>::infinity();
  out.max_condition = std::max(out.max_condition, condition);
  if (!(condition <= Real(1e12)))
    throw std::runtime_error("free decay is singular: a dark state keeps its excitation indefinitely");
  const VectorX<Real> rest = lu.solve(VectorX<Real>(-c));
  if ((rest - ground).cwiseAbs().maxCoeff() > Real(1e-10))
    throw std::runtime_error("free decay does not return to the ground state (dark state); photon counts diverge");
  excess += lu.solve(VectorX<Real>(ground - r));

  out.excess = to_state(excess);
  out.during_pulse = to_state(in_pulse);
  return out;
}

}  // namespace diode
