// hierarchy.hpp - Fock-state input hierarchy for the matrix elements E_{p,q}[O] = <p|O(t)|q>.
//
// Level s collects the elements with p + q = s. A field annihilation acting on |q> lowers q,
// a creation acting on <p| lowers p, so level s is driven only by level s - 1.

#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "diode/model.hpp"
#include "diode/operators.hpp"

namespace diode {

template <typename Real = double>
struct BuildOptions {
  bool apply_frame{true};
  bool prune_by_excitation{true};  // keep only blocks with q - p equal to the operator's lowering count
  FaultInjection fault{FaultInjection::None};
};

struct Unknown {
  int p{0};
  int q{0};
  Op op{Op::S1};
};

/// Every stored matrix element of a hierarchy up to photon number n_max, including the pruned zeros.
template <typename Real = double>
class HierarchyState {
 public:
  HierarchyState() = default;
  explicit HierarchyState(int n_max)
      : n_max_(n_max), data_(static_cast<std::size_t>((n_max + 1) * (n_max + 1) * kNumOps)) {}

  int n_max() const { return n_max_; }

  Complex<Real>& at(int p, int q, Op op) { return data_[offset(p, q, op)]; }
  const Complex<Real>& at(int p, int q, Op op) const { return data_[offset(p, q, op)]; }

  /// E_{p,q}[r], resolving adjoints through E_{p,q}[O^+] = conj(E_{q,p}[O]).
  Complex<Real> value(int p, int q, OpRef r, Real identity = Real(1)) const {
    switch (r.kind) {
      case OpRef::Kind::Identity: return p == q ? Complex<Real>(identity) : Complex<Real>();
      case OpRef::Kind::Plain: return at(p, q, r.op);
      case OpRef::Kind::Adjoint: return std::conj(at(q, p, r.op));
    }
    return {};
  }

  std::vector<Complex<Real>>& raw() { return data_; }
  const std::vector<Complex<Real>>& raw() const { return data_; }

 private:
  std::size_t offset(int p, int q, Op op) const {
    if (p < 0 || q < 0 || p > n_max_ || q > n_max_) throw std::out_of_range("hierarchy block out of range");
    return static_cast<std::size_t>((p * (n_max_ + 1) + q) * kNumOps + static_cast<int>(op));
  }
  int n_max_{0};
  std::vector<Complex<Real>> data_;
};

enum class Target { Same, SameConj, Lower, LowerConj, Identity };

template <typename Real = double>
struct Entry {
  int row{0};
  int col{0};
  Target target{Target::Same};
  Complex<Real> coeff{};
  int frequency{0};    // e^{i frequency delta t}
  int envelope{0};     // 0: none, +1: xi, -1: conj(xi)
  int retardation{0};  // envelope argument t + retardation * mu
};

template <typename Real = double>
struct FieldCoupling {
  int envelope{1};
  int retardation{0};
  MatrixXc<Real> lower;       // multiplies x_{s-1}
  MatrixXc<Real> lower_conj;  // multiplies conj(x_{s-1})
  VectorXc<Real> constant;    // identity blocks of level s-1
};

/// Level operators at a given time with the envelope factored out:
/// dx/dt = M x + N conj(x) + f + sum_g env_g(t) (C_g y + D_g conj(y) + c_g).
template <typename Real = double>
struct LevelOperators {
  MatrixXc<Real> same;
  MatrixXc<Real> same_conj;
  VectorXc<Real> source;
  std::vector<FieldCoupling<Real>> couplings;
};

template <typename Real = double>
struct LevelSystem {
  int level{0};
  int n_max{0};
  std::vector<Unknown> unknowns;
  std::vector<Unknown> lower_unknowns;
  std::vector<Entry<Real>> entries;
  Real delta{0};
  Real mu{0};
  PulseSpec<Real> pulse{};
  bool frame_applied{true};

  int size() const { return static_cast<int>(unknowns.size()); }
  int lower_size() const { return static_cast<int>(lower_unknowns.size()); }

  LevelOperators<Real> operators(Real t) const {
    using C = Complex<Real>;
    const int n = size();
    const int m = lower_size();
    LevelOperators<Real> ops;
    ops.same = MatrixXc<Real>::Zero(n, n);
    ops.same_conj = MatrixXc<Real>::Zero(n, n);
    ops.source = VectorXc<Real>::Zero(n);
    auto coupling = [&](int env, int ret) -> FieldCoupling<Real>& {
      for (auto& c : ops.couplings)
        if (c.envelope == env && c.retardation == ret) return c;
      ops.couplings.push_back({env, ret, MatrixXc<Real>::Zero(n, m), MatrixXc<Real>::Zero(n, m),
                               VectorXc<Real>::Zero(n)});
      return ops.couplings.back();
    };
    for (const auto& e : entries) {
      const C c = e.frequency == 0 ? e.coeff
                                   : e.coeff * std::exp(C(0, static_cast<Real>(e.frequency) * delta * t));
      if (e.envelope == 0) {
        switch (e.target) {
          case Target::Same: ops.same(e.row, e.col) += c; break;
          case Target::SameConj: ops.same_conj(e.row, e.col) += c; break;
          case Target::Identity: ops.source(e.row) += c; break;
          default: throw std::logic_error("homogeneous entry referencing the lower level");
        }
      } else {
        auto& g = coupling(e.envelope, e.retardation);
        switch (e.target) {
          case Target::Lower: g.lower(e.row, e.col) += c; break;
          case Target::LowerConj: g.lower_conj(e.row, e.col) += c; break;
          case Target::Identity: g.constant(e.row) += c; break;
          default: throw std::logic_error("field entry referencing the same level");
        }
      }
    }
    return ops;
  }

  Complex<Real> envelope_factor(const FieldCoupling<Real>& g, Real t) const {
    const Complex<Real> xi = envelope(t + static_cast<Real>(g.retardation) * mu, pulse);
    return g.envelope > 0 ? xi : std::conj(xi);
  }
};

template <typename Real = double>
struct Hierarchy {
  int n_max{0};
  Direction direction{Direction::Left};
  DeviceParams<Real> params{};
  PulseSpec<Real> pulse{};
  std::vector<LevelSystem<Real>> levels;
};

namespace detail {

inline bool allowed(int p, int q, Op op, bool prune) { return !prune || q - p == lowering_count(op); }

inline std::vector<Unknown> level_unknowns(int s, int n_max, bool prune) {
  std::vector<Unknown> out;
  if (s < 0) return out;
  for (int p = std::max(0, s - n_max); p <= std::min(s, n_max); ++p)
    for (Op op : kAllOps)
      if (allowed(p, s - p, op, prune)) out.push_back({p, s - p, op});
  return out;
}

class UnknownIndex {
 public:
  UnknownIndex(const std::vector<Unknown>& u, int n_max) : n_max_(n_max), idx_((n_max + 1) * (n_max + 1) * kNumOps, -1) {
    for (std::size_t i = 0; i < u.size(); ++i) idx_[slot(u[i].p, u[i].q, u[i].op)] = static_cast<int>(i);
  }
  int find(int p, int q, Op op) const {
    if (p < 0 || q < 0 || p > n_max_ || q > n_max_) return -1;
    return idx_[slot(p, q, op)];
  }

 private:
  std::size_t slot(int p, int q, Op op) const {
    return static_cast<std::size_t>((p * (n_max_ + 1) + q) * kNumOps + static_cast<int>(op));
  }
  int n_max_;
  std::vector<int> idx_;
};

}  // namespace detail

/// Build the level systems 0..2N for a Fock-type input of at most N photons entering from `direction`.
template <typename Real>
Hierarchy<Real> build_hierarchy(const DeviceParams<Real>& params, int n_max, Direction direction,
                                const PulseSpec<Real>& pulse, const BuildOptions<Real>& options = {}) {
  params.validate();
  pulse.validate();
  if (n_max < 0) throw ValidationError("photon number must be nonnegative");
  using C = Complex<Real>;

  const auto table = heisenberg_equations(params, options.fault);
  const Channel input = input_channel(direction);
  const bool delayed = params.mu_envelope_delay;
  const Real mu = params.mu();

  Hierarchy<Real> h;
  h.n_max = n_max;
  h.direction = direction;
  h.params = params;
  h.pulse = pulse;

  for (int s = 0; s <= 2 * n_max; ++s) {
    LevelSystem<Real> sys;
    sys.level = s;
    sys.n_max = n_max;
    sys.unknowns = detail::level_unknowns(s, n_max, options.prune_by_excitation);
    sys.lower_unknowns = detail::level_unknowns(s - 1, n_max, options.prune_by_excitation);
    sys.delta = params.delta;
    sys.mu = delayed ? mu : Real(0);
    sys.pulse = pulse;
    sys.frame_applied = options.apply_frame;
    const detail::UnknownIndex same(sys.unknowns, n_max);
    const detail::UnknownIndex lower(sys.lower_unknowns, n_max);

    for (int row = 0; row < sys.size(); ++row) {
      const Unknown u = sys.unknowns[row];
      const int kappa = frame_charge(u.op);
      if (options.apply_frame && kappa != 0)
        sys.entries.push_back({row, row, Target::Same, C(0, static_cast<Real>(kappa) * params.delta), 0, 0, 0});

      for (const auto& term : table[static_cast<int>(u.op)]) {
        Entry<Real> e;
        e.row = row;
        e.frequency = term.nu + term.field_nu();
        if (options.apply_frame) e.frequency += kappa - term.target.charge();
        e.coeff = term.coeff;

        // Block (bp, bq) of the referenced operator after the field acts.
        int bp = u.p;
        int bq = u.q;
        if (term.field != FieldAction::None) {
          if (term.channel != input) continue;
          int& lowered = term.field == FieldAction::Annihilate ? bq : bp;
          if (lowered == 0) continue;
          e.coeff *= std::sqrt(static_cast<Real>(lowered));
          --lowered;
          e.envelope = term.field == FieldAction::Annihilate ? 1 : -1;
          if (delayed && term.retardation != 0) {
            e.retardation = term.retardation;
            // carrier evaluated at the retarded time t + r mu
            e.coeff *= std::exp(C(0, -static_cast<Real>(e.envelope * term.retardation) * params.delta * mu));
          }
        }

        const bool from_lower = term.field != FieldAction::None;
        const auto& index = from_lower ? lower : same;
        switch (term.target.kind) {
          case OpRef::Kind::Identity:
            if (bp != bq) continue;
            e.target = Target::Identity;
            break;
          case OpRef::Kind::Plain:
            e.col = index.find(bp, bq, term.target.op);
            e.target = from_lower ? Target::Lower : Target::Same;
            break;
          case OpRef::Kind::Adjoint:
            e.col = index.find(bq, bp, term.target.op);
            e.target = from_lower ? Target::LowerConj : Target::SameConj;
            break;
        }
        if (e.target != Target::Identity && e.col < 0) continue;  // pruned: identically zero
        sys.entries.push_back(e);
      }
    }
    h.levels.push_back(std::move(sys));
  }
  return h;
}

/// Largest change of any level coefficient across several times inside the flat part of the pulse.
/// Zero (to rounding) exactly when the rotating-frame transformation removed all explicit phases.
template <typename Real>
Real residual_time_dependence(const Hierarchy<Real>& h) {
  const Real T = h.pulse.duration();
  const std::array<Real, 4> times{Real(0), Real(0.1234567), T / Real(3), T / std::sqrt(Real(5))};
  Real worst = 0;
  for (const auto& sys : h.levels) {
    const auto ref = sys.operators(times[0]);
    for (std::size_t k = 1; k < times.size(); ++k) {
      const auto ops = sys.operators(times[k]);
      worst = std::max(worst, (ops.same - ref.same).cwiseAbs().maxCoeff());
      worst = std::max(worst, (ops.same_conj - ref.same_conj).cwiseAbs().maxCoeff());
      if (ops.source.size() > 0) worst = std::max(worst, (ops.source - ref.source).cwiseAbs().maxCoeff());
      for (std::size_t g = 0; g < ops.couplings.size(); ++g) {
        const auto& a = ops.couplings[g];
        const auto& b = ref.couplings[g];
        if (a.lower.size() > 0) {
          worst = std::max(worst, (a.lower - b.lower).cwiseAbs().maxCoeff());
          worst = std::max(worst, (a.lower_conj - b.lower_conj).cwiseAbs().maxCoeff());
        }
        worst = std::max(worst, (a.constant - b.constant).cwiseAbs().maxCoeff());
      }
    }
  }
  return worst;
}

}  // namespace diode
