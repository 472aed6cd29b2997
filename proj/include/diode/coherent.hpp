// coherent.hpp - steady state under a coherent (c-number) drive of mean photon number nbar.
//
// A coherent pulse is an eigenstate of the input field, so the nine expectation values close
// on themselves: F -> eta = sqrt(nbar) xi and F^+ -> conj(eta).

#pragma once

#include <array>

#include "diode/steady_state.hpp"

namespace diode {

template <typename Real = double>
struct CoherentSolution {
  std::array<Complex<Real>, kNumOps> values{};
  Real residual{0};
  Real condition{0};

  Complex<Real> value(OpRef r) const {
    switch (r.kind) {
      case OpRef::Kind::Identity: return Real(1);
      case OpRef::Kind::Plain: return values[static_cast<int>(r.op)];
      case OpRef::Kind::Adjoint: return std::conj(values[static_cast<int>(r.op)]);
    }
    return {};
  }
};

template <typename Real>
CoherentSolution<Real> solve_coherent(const DeviceParams<Real>& params, Real nbar, const PulseSpec<Real>& pulse,
                                      Direction direction, FaultInjection fault = FaultInjection::None,
                                      Real condition_limit = Real(1e12)) {
  params.validate();
  pulse.validate();
  if (!(nbar >= Real(0)) || !std::isfinite(static_cast<double>(nbar)))
    throw ValidationError("coherent nbar must be nonnegative and finite");
  using C = Complex<Real>;

  const auto table = heisenberg_equations(params, fault);
  const Channel input = input_channel(direction);
  const C eta = std::sqrt(nbar) * pulse.amplitude();
  const Real mu = params.mu();

  MatrixXc<Real> M = MatrixXc<Real>::Zero(kNumOps, kNumOps);
  MatrixXc<Real> N = MatrixXc<Real>::Zero(kNumOps, kNumOps);
  VectorXc<Real> b = VectorXc<Real>::Zero(kNumOps);
  for (Op op : kAllOps) {
    const int row = static_cast<int>(op);
    M(row, row) += C(0, static_cast<Real>(frame_charge(op)) * params.delta);
    for (const auto& term : table[row]) {
      if (term.nu + term.field_nu() + frame_charge(op) - term.target.charge() != 0)
        throw std::logic_error("coherent equations keep an explicit time dependence");
      C c = term.coeff;
      if (term.field == FieldAction::Annihilate || term.field == FieldAction::Create) {
        if (term.channel != input) continue;
        const int sign = term.field == FieldAction::Annihilate ? 1 : -1;
        c *= sign > 0 ? eta : std::conj(eta);
        if (params.mu_envelope_delay && term.retardation != 0)
          c *= std::exp(C(0, -static_cast<Real>(sign * term.retardation) * params.delta * mu));
      }
      switch (term.target.kind) {
        case OpRef::Kind::Identity: b(row) += c; break;
        case OpRef::Kind::Plain: M(row, static_cast<int>(term.target.op)) += c; break;
        case OpRef::Kind::Adjoint: N(row, static_cast<int>(term.target.op)) += c; break;
      }
    }
  }

  LinearSolveInfo<Real> info;
  const VectorXc<Real> x = solve_real_linear(M, N, b, &info, 0, condition_limit);
  CoherentSolution<Real> out;
  for (int k = 0; k < kNumOps; ++k) out.values[k] = x(k);
  out.residual = info.residual;
  out.condition = info.condition;
  return out;
}

}  // namespace diode
