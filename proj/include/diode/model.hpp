// model.hpp - physical parameters, pulse envelope and input states of the two-atom diode.
//
// All rates are measured in units of the atom-waveguide decay rate gamma. The
// carrier frequency omega_0 is resonant with the right atom; the left atom sits
// at omega_1 = omega_0 - delta.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace diode {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using MatrixX = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorX = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
template <typename Real>
using MatrixXc = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using VectorXc = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

/// Rejected input (bad parameter, malformed state, invalid grid).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Which port the pulse enters. Left-incoming light occupies the right-moving
/// mode (a-type operators); right-incoming light the left-moving mode (b-type).
enum class Direction { Left, Right };

inline const char* to_string(Direction d) { return d == Direction::Left ? "left" : "right"; }
inline Direction mirrored(Direction d) { return d == Direction::Left ? Direction::Right : Direction::Left; }

template <typename Real = double>
struct DeviceParams {
  Real gamma{1};           // decay rate into each waveguide direction
  Real delta{0};           // omega_0 - omega_1
  Real theta{0};           // omega_0 d / v_g  [rad]
  Real delta_mu{0};        // delta * d / v_g, separates e^{i omega_1 mu} from e^{i omega_0 mu}
  bool mu_envelope_delay{false};

  /// Phase accumulated at the left atom's frequency, omega_1 mu.
  Real theta1() const { return theta - delta_mu; }

  /// Propagation delay d / v_g recovered from delta_mu; zero without detuning.
  Real mu() const { return delta != Real(0) ? delta_mu / delta : Real(0); }

  void validate() const {
    if (!(gamma > Real(0)) || !std::isfinite(static_cast<double>(gamma)))
      throw ValidationError("gamma must be positive and finite");
    if (!std::isfinite(static_cast<double>(delta)) || !std::isfinite(static_cast<double>(theta)) ||
        !std::isfinite(static_cast<double>(delta_mu)))
      throw ValidationError("device parameters must be finite");
    if (mu_envelope_delay && mu() < Real(0))
      throw ValidationError("envelope delay requires delta_mu / delta >= 0");
  }

  /// Convenience constructor from the dimensionless figure axes (gamma = 1).
  static DeviceParams from_ratios(Real delta_over_gamma, Real theta_over_2pi, Real delta_mu = 0) {
    DeviceParams p;
    p.delta = delta_over_gamma;
    p.theta = Real(2) * std::numbers::pi_v<Real> * theta_over_2pi;
    p.delta_mu = delta_mu;
    return p;
  }
};

enum class PulseShape { Square };

template <typename Real = double>
struct PulseSpec {
  Real omega{Real(1) / 100};   // bandwidth; the square pulse lasts 2 / omega
  PulseShape shape{PulseShape::Square};

  Real duration() const { return Real(2) / omega; }
  Real amplitude() const { return std::sqrt(omega / Real(2)); }

  void validate() const {
    if (!(omega > Real(0)) || !std::isfinite(static_cast<double>(omega)))
      throw ValidationError("pulse bandwidth omega must be positive and finite");
  }
};

/// Mode function xi(tau) of the pulse, normalized to unit integrated intensity.
template <typename Real>
Complex<Real> envelope(Real tau, const PulseSpec<Real>& pulse) {
  if (tau < Real(0) || tau > pulse.duration()) return {};
  return {pulse.amplitude(), Real(0)};
}

struct Fock {
  int n{0};
};

template <typename Real = double>
struct Coherent {
  Real nbar{0};
};

template <typename Real = double>
struct Superposition {
  std::vector<Complex<Real>> coefficients;  // c_n for n = 0..N
};

template <typename Real = double>
struct InputState {
  std::variant<Fock, Coherent<Real>, Superposition<Real>> kind{Fock{}};
  Direction direction{Direction::Left};

  static InputState fock(int n, Direction d = Direction::Left) { return {Fock{n}, d}; }
  static InputState coherent(Real nbar, Direction d = Direction::Left) { return {Coherent<Real>{nbar}, d}; }
  static InputState superposition(std::vector<Complex<Real>> c, Direction d = Direction::Left) {
    return {Superposition<Real>{std::move(c)}, d};
  }

  bool is_coherent() const { return std::holds_alternative<Coherent<Real>>(kind); }

  InputState with_direction(Direction d) const {
    InputState s = *this;
    s.direction = d;
    return s;
  }

  /// Highest Fock level carried by the state; only meaningful for Fock and superposition inputs.
  int n_max() const {
    if (auto f = std::get_if<Fock>(&kind)) return f->n;
    if (auto s = std::get_if<Superposition<Real>>(&kind)) return static_cast<int>(s->coefficients.size()) - 1;
    throw ValidationError("coherent input has no Fock truncation");
  }

  Real mean_photon_number() const {
    return std::visit(
        [](const auto& k) -> Real {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Fock>) {
            return static_cast<Real>(k.n);
          } else if constexpr (std::is_same_v<K, Coherent<Real>>) {
            return k.nbar;
          } else {
            Real sum = 0;
            for (std::size_t n = 0; n < k.coefficients.size(); ++n)
              sum += std::norm(k.coefficients[n]) * static_cast<Real>(n);
            return sum;
          }
        },
        kind);
  }

  void validate() const {
    std::visit(
        [](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Fock>) {
            if (k.n < 0) throw ValidationError("Fock photon number must be nonnegative");
          } else if constexpr (std::is_same_v<K, Coherent<Real>>) {
            if (!(k.nbar >= Real(0)) || !std::isfinite(static_cast<double>(k.nbar)))
              throw ValidationError("coherent nbar must be nonnegative and finite");
          } else {
            if (k.coefficients.empty()) throw ValidationError("superposition needs at least one coefficient");
            Real norm = 0;
            for (const auto& c : k.coefficients) norm += std::norm(c);
            if (std::abs(norm - Real(1)) > Real(1e-12))
              throw ValidationError("superposition coefficients must satisfy sum |c_n|^2 = 1");
          }
        },
        kind);
  }
};

/// Mean photon flux of the input pulse (photons per unit time).
template <typename Real>
Real mean_flux(const InputState<Real>& input, const PulseSpec<Real>& pulse) {
  return input.mean_photon_number() * pulse.omega / Real(2);
}

}  // namespace diode
