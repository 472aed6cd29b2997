#include <doctest.h>

#include <array>

#include "diode/operators.hpp"
#include "support/master_equation.hpp"

using namespace diode;
using oracle::cd;
using oracle::Mat;

namespace {

// 16 operators spanning all 4x4 matrices: identity, the nine operators, their adjoints except the
// Hermitian z1, z2, z1*z2.
struct Basis {
  std::vector<OpRef> refs;
  std::vector<Mat> mats;
  Eigen::Matrix<cd, 16, 16> to_coeffs;  // inverse of the column matrix of vec(basis)

  explicit Basis(const oracle::Atoms& a) {
    add(OpRef::identity(), a.id);
    for (Op op : kAllOps) add(OpRef::plain(op), matrix(a, op));
    for (Op op : {Op::S1, Op::S2, Op::Z1S2, Op::S1Z2, Op::P1M2, Op::S1S2})
      add(OpRef::adjoint(op), matrix(a, op).adjoint());
    Eigen::Matrix<cd, 16, 16> cols;
    for (int k = 0; k < 16; ++k) cols.col(k) = oracle::vec(mats[k]);
    to_coeffs = cols.inverse();
  }

  static Mat matrix(const oracle::Atoms& a, Op op) {
    switch (op) {
      case Op::S1: return a.s1;
      case Op::Z1: return a.z1;
      case Op::S2: return a.s2;
      case Op::Z2: return a.z2;
      case Op::Z1S2: return a.z1 * a.s2;
      case Op::S1Z2: return a.s1 * a.z2;
      case Op::P1M2: return a.s1.adjoint() * a.s2;
      case Op::S1S2: return a.s1 * a.s2;
      case Op::Z1Z2: return a.z1 * a.z2;
    }
    return a.id;
  }

  void add(OpRef r, const Mat& m) {
    refs.push_back(r);
    mats.push_back(m);
  }

  int index(OpRef r) const {
    for (std::size_t k = 0; k < refs.size(); ++k)
      if (refs[k] == r) return static_cast<int>(k);
    if (r.kind == OpRef::Kind::Adjoint) {  // Hermitian operators
      for (std::size_t k = 0; k < refs.size(); ++k)
        if (refs[k] == OpRef::plain(r.op)) return static_cast<int>(k);
    }
    throw std::logic_error("operator missing from basis");
  }

  Eigen::Matrix<cd, 16, 1> decompose(const Mat& m) const { return to_coeffs * oracle::vec(m); }
};

struct Expected {
  Eigen::Matrix<cd, 16, 1> homogeneous = Eigen::Matrix<cd, 16, 1>::Zero();
  std::array<Eigen::Matrix<cd, 16, 1>, 2> annihilate{Eigen::Matrix<cd, 16, 1>::Zero(), Eigen::Matrix<cd, 16, 1>::Zero()};
  std::array<Eigen::Matrix<cd, 16, 1>, 2> create{Eigen::Matrix<cd, 16, 1>::Zero(), Eigen::Matrix<cd, 16, 1>::Zero()};
};

/// Coefficients of the carrier-frame table after the frame rescaling.
Expected from_table(const Basis& basis, const EquationTable<double>& table, Op op, double delta) {
  Expected e;
  e.homogeneous(basis.index(OpRef::plain(op))) += cd(0, frame_charge(op) * delta);
  for (const auto& t : table[static_cast<int>(op)]) {
    CHECK(t.nu + t.field_nu() + frame_charge(op) - t.target.charge() == 0);
    const int k = basis.index(t.target);
    const int ch = t.channel == Channel::A ? 0 : 1;
    switch (t.field) {
      case FieldAction::None: e.homogeneous(k) += t.coeff; break;
      case FieldAction::Annihilate: e.annihilate[ch](k) += t.coeff; break;
      case FieldAction::Create: e.create[ch](k) += t.coeff; break;
    }
  }
  return e;
}

/// Adjoint generator and input terms computed from the 4x4 matrices.
Expected from_matrices(const Basis& basis, const oracle::Device& d, Op op) {
  const Mat X = Basis::matrix(d.at, op);
  const cd i(0, 1);
  Mat G = i * (d.H() * X - X * d.H());
  std::array<Mat, 2> L{d.La(), d.Lb()};
  for (const Mat& c : L) {
    const Mat cdc = c.adjoint() * c;
    G += c.adjoint() * X * c - 0.5 * (cdc * X + X * cdc);
  }
  Expected e;
  e.homogeneous = basis.decompose(G);
  for (int ch = 0; ch < 2; ++ch) {
    e.annihilate[ch] = basis.decompose(-(X * L[ch].adjoint() - L[ch].adjoint() * X));
    e.create[ch] = basis.decompose(X * L[ch] - L[ch] * X);
  }
  return e;
}

double max_gap(const Expected& a, const Expected& b) {
  double gap = (a.homogeneous - b.homogeneous).cwiseAbs().maxCoeff();
  for (int ch = 0; ch < 2; ++ch) {
    gap = std::max(gap, (a.annihilate[ch] - b.annihilate[ch]).cwiseAbs().maxCoeff());
    gap = std::max(gap, (a.create[ch] - b.create[ch]).cwiseAbs().maxCoeff());
  }
  return gap;
}

}  // namespace

TEST_CASE("equation table matches the adjoint Lindbladian of the 4x4 model") {
  const oracle::Atoms atoms;
  const Basis basis(atoms);
  for (double delta : {0.0, 0.1, -0.37, 1.3})
    for (double theta : {0.0, 0.7, 2.0, 3.14159, 5.1}) {
      CAPTURE(delta);
      CAPTURE(theta);
      DeviceParams<double> p;
      p.gamma = 0.8;
      p.delta = delta;
      p.theta = theta;
      const auto table = heisenberg_equations(p);
      const oracle::Device dev{p.gamma, delta, theta};
      for (Op op : kAllOps) {
        CAPTURE(name(op));
        CHECK(max_gap(from_table(basis, table, op, delta), from_matrices(basis, dev, op)) < 1e-12);
      }
    }
}

TEST_CASE("fault injection breaks the atom-1 coupling") {
  const oracle::Atoms atoms;
  const Basis basis(atoms);
  DeviceParams<double> p;
  p.delta = 0.1;
  p.theta = 2.0;
  const auto table = heisenberg_equations(p, FaultInjection::FlipAtom1CouplingPhase);
  const oracle::Device dev{p.gamma, p.delta, p.theta};
  CHECK(max_gap(from_table(basis, table, Op::S1, p.delta), from_matrices(basis, dev, Op::S1)) > 0.1);
  CHECK(max_gap(from_table(basis, table, Op::S2, p.delta), from_matrices(basis, dev, Op::S2)) < 1e-12);
}

TEST_CASE("every term is stationary after the frame rescaling, also with delta_mu") {
  DeviceParams<double> p;
  p.delta = 0.3;
  p.theta = 1.1;
  p.delta_mu = 0.05;
  const auto table = heisenberg_equations(p);
  for (Op op : kAllOps)
    for (const auto& t : table[static_cast<int>(op)])
      CHECK(t.nu + t.field_nu() + frame_charge(op) - t.target.charge() == 0);
}

TEST_CASE("operator references") {
  CHECK(OpRef::adjoint(Op::S1).charge() == -1);
  CHECK(OpRef::adjoint(Op::P1M2).charge() == 1);
  CHECK(OpRef::identity().charge() == 0);
  CHECK(OpRef::plain(Op::S1S2).lowering() == 2);
  CHECK(OpRef::adjoint(Op::S1Z2).lowering() == -1);
  CHECK(to_string(OpRef::adjoint(Op::S1)) == "(s1)^+");
}
