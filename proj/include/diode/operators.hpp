// operators.hpp - the nine two-atom operators closed under the Heisenberg equations, and
// their equations of motion written as a table of terms.
//
// The table is written in the frame where the left-incoming carrier appears as e^{-i delta t}
// on the input field and every coefficient carries an explicit e^{i nu delta t}. Each operator
// has a frame charge kappa; rescaling O -> e^{-i kappa delta t} O removes every explicit phase
// and leaves the constant equations of the omega_0 frame.

#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

#include "diode/model.hpp"

namespace diode {

enum class Op : int { S1 = 0, Z1, S2, Z2, Z1S2, S1Z2, P1M2, S1S2, Z1Z2 };
inline constexpr int kNumOps = 9;

inline constexpr std::array<Op, kNumOps> kAllOps{Op::S1,   Op::Z1,   Op::S2,   Op::Z2,  Op::Z1S2,
                                                 Op::S1Z2, Op::P1M2, Op::S1S2, Op::Z1Z2};

inline const char* name(Op op) {
  static constexpr std::array<const char*, kNumOps> names{"s1",   "z1",      "s2",   "z2",  "z1*s2",
                                                          "s1*z2", "s1^+*s2", "s1*s2", "z1*z2"};
  return names[static_cast<int>(op)];
}

/// Charge under the rotating-frame rescaling: +1 for a net atom-1 lowering, -1 for raising.
constexpr int frame_charge(Op op) {
  switch (op) {
    case Op::S1: case Op::S1Z2: case Op::S1S2: return 1;
    case Op::P1M2: return -1;
    default: return 0;
  }
}

/// Net number of excitations removed by the operator; fixes which (p, q) blocks can be nonzero.
constexpr int lowering_count(Op op) {
  switch (op) {
    case Op::S1: case Op::S2: case Op::Z1S2: case Op::S1Z2: return 1;
    case Op::S1S2: return 2;
    default: return 0;
  }
}

/// Reference to the identity, an operator, or its adjoint.
struct OpRef {
  enum class Kind { Identity, Plain, Adjoint };
  Kind kind{Kind::Identity};
  Op op{Op::S1};

  static constexpr OpRef identity() { return {Kind::Identity, Op::S1}; }
  static constexpr OpRef plain(Op o) { return {Kind::Plain, o}; }
  static constexpr OpRef adjoint(Op o) { return {Kind::Adjoint, o}; }

  constexpr int charge() const {
    if (kind == Kind::Identity) return 0;
    return kind == Kind::Plain ? frame_charge(op) : -frame_charge(op);
  }
  constexpr int lowering() const {
    if (kind == Kind::Identity) return 0;
    return kind == Kind::Plain ? lowering_count(op) : -lowering_count(op);
  }
  bool operator==(const OpRef&) const = default;
};

inline std::string to_string(const OpRef& r) {
  if (r.kind == OpRef::Kind::Identity) return "1";
  std::string s = std::string("(") + name(r.op) + ")";
  return r.kind == OpRef::Kind::Adjoint ? s + "^+" : s;
}

enum class Channel { A, B };                         // right-moving / left-moving input mode
enum class FieldAction { None, Annihilate, Create };  // Y F  /  F^+ Y

inline Channel input_channel(Direction d) { return d == Direction::Left ? Channel::A : Channel::B; }

template <typename Real = double>
struct Term {
  OpRef target{};
  Complex<Real> coeff{};
  int nu{0};                     // explicit e^{i nu delta t}
  FieldAction field{FieldAction::None};
  Channel channel{Channel::A};
  int retardation{0};            // field argument t + retardation * mu

  /// Carrier exponent of the field factor: the input carries e^{-i delta t}.
  int field_nu() const {
    if (field == FieldAction::Annihilate) return -1;
    if (field == FieldAction::Create) return 1;
    return 0;
  }
};

enum class FaultInjection { None, FlipAtom1CouplingPhase };

template <typename Real = double>
using EquationTable = std::array<std::vector<Term<Real>>, kNumOps>;

/// Heisenberg equations of motion for the nine operators, with the carrier frame still explicit.
template <typename Real>
EquationTable<Real> heisenberg_equations(const DeviceParams<Real>& p,
                                         FaultInjection fault = FaultInjection::None) {
  using C = Complex<Real>;
  const Real g = p.gamma;
  const Real sg = std::sqrt(p.gamma);
  const C i(0, 1);
  const C e0 = std::exp(i * p.theta);
  const C e0c = std::conj(e0);
  const C e1 = std::exp(i * p.theta1());
  const C e1c = std::conj(e1);

  const auto id = OpRef::identity();
  const auto P = [](Op o) { return OpRef::plain(o); };
  const auto D = [](Op o) { return OpRef::adjoint(o); };
  const auto hom = [](OpRef y, C c, int nu = 0) { return Term<Real>{y, c, nu, FieldAction::None, Channel::A, 0}; };
  const auto ann = [](OpRef y, C c, Channel ch, int nu = 0, int ret = 0) {
    return Term<Real>{y, c, nu, FieldAction::Annihilate, ch, ret};
  };
  const auto cre = [](OpRef y, C c, Channel ch, int nu = 0, int ret = 0) {
    return Term<Real>{y, c, nu, FieldAction::Create, ch, ret};
  };
  constexpr auto A = Channel::A;
  constexpr auto B = Channel::B;

  const C atom1_coupling = fault == FaultInjection::FlipAtom1CouplingPhase ? g * e0c : g * e0;

  EquationTable<Real> t;
  t[static_cast<int>(Op::S1)] = {
      hom(P(Op::S1), -g),
      hom(P(Op::Z1S2), atom1_coupling, -1),
      ann(P(Op::Z1), sg, A),
      ann(P(Op::Z1), sg, B),
  };
  t[static_cast<int>(Op::Z1)] = {
      hom(id, -2 * g),
      hom(P(Op::Z1), -2 * g),
      hom(P(Op::P1M2), -2 * g * e0, -1),
      hom(D(Op::P1M2), -2 * g * e0c, 1),
      ann(D(Op::S1), -2 * sg, A),
      ann(D(Op::S1), -2 * sg, B),
      cre(P(Op::S1), -2 * sg, A),
      cre(P(Op::S1), -2 * sg, B),
  };
  t[static_cast<int>(Op::S2)] = {
      hom(P(Op::S2), -g),
      hom(P(Op::S1Z2), g * e0, 1),
      ann(P(Op::Z2), sg * e1, A, 1, -1),
      ann(P(Op::Z2), sg * e1c, B, 1, 1),
  };
  t[static_cast<int>(Op::Z2)] = {
      hom(id, -2 * g),
      hom(P(Op::Z2), -2 * g),
      hom(D(Op::P1M2), -2 * g * e1, 1),
      hom(P(Op::P1M2), -2 * g * e1c, -1),
      ann(D(Op::S2), -2 * sg * e1, A, 1, -1),
      ann(D(Op::S2), -2 * sg * e1c, B, 1, 1),
      cre(P(Op::S2), -2 * sg * e1c, A, -1, -1),
      cre(P(Op::S2), -2 * sg * e1, B, -1, 1),
  };
  t[static_cast<int>(Op::Z1S2)] = {
      hom(P(Op::Z1S2), -3 * g),
      hom(P(Op::S2), -2 * g),
      hom(P(Op::S1), -g * e0c, 1),
      hom(P(Op::S1Z2), -g * (e0c + e1), 1),
      ann(P(Op::P1M2), -2 * sg, A),
      ann(P(Op::P1M2), -2 * sg, B),
      cre(P(Op::S1S2), -2 * sg, A),
      cre(P(Op::S1S2), -2 * sg, B),
      ann(P(Op::Z1Z2), sg * e1, A, 1, -1),
      ann(P(Op::Z1Z2), sg * e1c, B, 1, 1),
  };
  t[static_cast<int>(Op::S1Z2)] = {
      hom(P(Op::S1Z2), -3 * g),
      hom(P(Op::S1), -2 * g),
      hom(P(Op::S2), -g * e0c, -1),
      hom(P(Op::Z1S2), -g * (e0 + e1c), -1),
      ann(D(Op::P1M2), -2 * sg * e1, A, 1, -1),
      ann(D(Op::P1M2), -2 * sg * e1c, B, 1, 1),
      cre(P(Op::S1S2), -2 * sg * e1c, A, -1, -1),
      cre(P(Op::S1S2), -2 * sg * e1, B, -1, 1),
      ann(P(Op::Z1Z2), sg, A),
      ann(P(Op::Z1Z2), sg, B),
  };
  t[static_cast<int>(Op::P1M2)] = {
      hom(P(Op::P1M2), -2 * g),
      hom(P(Op::Z1), g / 2 * e0c, 1),
      hom(P(Op::Z2), g / 2 * e0, 1),
      hom(P(Op::Z1Z2), g / 2 * (e0 + e1c), 1),
      cre(P(Op::Z1S2), sg, A),
      cre(P(Op::Z1S2), sg, B),
      ann(D(Op::S1Z2), sg * e1, A, 1, -1),
      ann(D(Op::S1Z2), sg * e1c, B, 1, 1),
  };
  t[static_cast<int>(Op::S1S2)] = {
      hom(P(Op::S1S2), -2 * g),
      ann(P(Op::Z1S2), sg, A),
      ann(P(Op::Z1S2), sg, B),
      ann(P(Op::S1Z2), sg * e1, A, 1, -1),
      ann(P(Op::S1Z2), sg * e1c, B, 1, 1),
  };
  t[static_cast<int>(Op::Z1Z2)] = {
      hom(P(Op::Z1Z2), -4 * g),
      hom(P(Op::Z1), -2 * g),
      hom(P(Op::Z2), -2 * g),
      hom(P(Op::P1M2), 2 * g * (e0 + e1c), -1),
      hom(D(Op::P1M2), 2 * g * (e0c + e1), 1),
      ann(D(Op::S1Z2), -2 * sg, A),
      ann(D(Op::S1Z2), -2 * sg, B),
      cre(P(Op::S1Z2), -2 * sg, A),
      cre(P(Op::S1Z2), -2 * sg, B),
      ann(D(Op::Z1S2), -2 * sg * e1, A, 1, -1),
      ann(D(Op::Z1S2), -2 * sg * e1c, B, 1, 1),
      cre(P(Op::Z1S2), -2 * sg * e1c, A, -1, -1),
      cre(P(Op::Z1S2), -2 * sg * e1, B, -1, 1),
  };
  return t;
}

}  // namespace diode
