// transfer_oracle.hpp - single-photon scattering off two emitters composed as a two-port.
//
// Independent of the hierarchy code. Amplitude convention: columns (right-moving, left-moving),
// M maps the left side of a scatterer to its right side.

#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "diode/model.hpp"

namespace diode {

template <typename Real = double>
struct TransferOracleParams {
  Real gamma{1};   // decay rate into each direction
  Real delta1{0};  // omega - omega_1 (left atom)
  Real delta2{0};  // omega - omega_2 (right atom)
  Real theta{0};   // propagation phase between the atoms at omega

  void validate() const {
    if (!(gamma > Real(0))) throw ValidationError("oracle gamma must be positive");
  }

  /// Carrier omega_0 = omega_2 + offset for the device parameters (offset = omega - omega_0).
  static TransferOracleParams at_offset(const DeviceParams<Real>& p, Real offset = 0) {
    return {p.gamma, p.delta + offset, offset, p.theta + offset * p.mu()};
  }
};

template <typename Real = double>
struct EmitterAmplitudes {
  Complex<Real> t;
  Complex<Real> r;
};

/// One two-level emitter side-coupled to the waveguide, detuning delta = omega - omega_j.
template <typename Real>
EmitterAmplitudes<Real> emitter_amplitudes(Real delta, Real gamma) {
  const Complex<Real> den(gamma, -delta);
  return {Complex<Real>(0, -delta) / den, Complex<Real>(-gamma, 0) / den};
}

template <typename Real>
Eigen::Matrix<Complex<Real>, 2, 2> emitter_transfer(const EmitterAmplitudes<Real>& a) {
  Eigen::Matrix<Complex<Real>, 2, 2> m;
  m << a.t - a.r * a.r / a.t, a.r / a.t, -a.r / a.t, Real(1) / a.t;
  return m;
}

template <typename Real = double>
struct TwoPortAmplitudes {
  Complex<Real> t_fwd;  // incident from the left
  Complex<Real> r_fwd;
  Complex<Real> t_bwd;  // incident from the right
  Complex<Real> r_bwd;
};

/// Composition through the transfer-matrix product M2 P M1. Undefined when an emitter is exactly
/// resonant (t = 0 makes M singular).
template <typename Real>
TwoPortAmplitudes<Real> transfer_matrix_amplitudes(const TransferOracleParams<Real>& p) {
  p.validate();
  using C = Complex<Real>;
  const auto a1 = emitter_amplitudes(p.delta1, p.gamma);
  const auto a2 = emitter_amplitudes(p.delta2, p.gamma);
  Eigen::Matrix<C, 2, 2> prop = Eigen::Matrix<C, 2, 2>::Zero();
  prop(0, 0) = std::exp(C(0, p.theta));
  prop(1, 1) = std::exp(C(0, -p.theta));
  const Eigen::Matrix<C, 2, 2> m = emitter_transfer(a2) * prop * emitter_transfer(a1);
  const C det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return {det / m(1, 1), -m(1, 0) / m(1, 1), Real(1) / m(1, 1), m(0, 1) / m(1, 1)};
}

/// Same two-port composed as scattering matrices (multiple reflections summed in closed form),
/// which stays finite for resonant emitters. Reflections are referenced at the entrance atom.
template <typename Real>
TwoPortAmplitudes<Real> single_photon_amplitudes(const TransferOracleParams<Real>& p) {
  p.validate();
  using C = Complex<Real>;
  const auto a1 = emitter_amplitudes(p.delta1, p.gamma);
  const auto a2 = emitter_amplitudes(p.delta2, p.gamma);
  const C ph = std::exp(C(0, p.theta));
  const C loop = Real(1) - a1.r * a2.r * ph * ph;
  const C t = a1.t * a2.t * ph / loop;
  return {t, a1.r + a1.t * a1.t * a2.r * ph * ph / loop, t, a2.r + a2.t * a2.t * a1.r * ph * ph / loop};
}

/// Power spectrum of the square pulse, |f(w)|^2 with w = omega - omega_0; integrates to 1.
template <typename Real>
Real square_pulse_spectrum(Real w, Real omega) {
  if (std::abs(w) < Real(1e-8) * omega) return Real(1) / (std::numbers::pi_v<Real> * omega);
  const Real s = std::sin(w / omega);
  return omega / std::numbers::pi_v<Real> * s * s / (w * w);
}

template <typename Real = double>
struct BandwidthTransmission {
  Real fwd{0};
  Real bwd{0};
};

/// Spectrum-weighted single-photon transmission of a square pulse of bandwidth omega.
/// Integrates |f|^2 (|t|^2 - 1) + 1 with Gauss-Legendre panels over |w| <= cutoff; the neglected
/// tail is bounded by (omega / pi) * gamma^2 / cutoff^3.
template <typename Real>
BandwidthTransmission<Real> finite_bandwidth_transmission(const DeviceParams<Real>& p, Real omega,
                                                          Real cutoff_over_gamma = Real(60),
                                                          long max_panels = 4'000'000) {
  static constexpr double x5[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                   0.9061798459386640};
  static constexpr double w5[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                   0.2369268850561891};
  const Real cutoff = cutoff_over_gamma * std::max(p.gamma, omega);
  Real width = std::min(omega, p.gamma) / Real(20);  // resolves subradiant lines of width ~0.05 gamma
  long panels = static_cast<long>(std::ceil(Real(2) * cutoff / width));
  if (panels > max_panels) panels = max_panels;
  width = Real(2) * cutoff / static_cast<Real>(panels);

  Real sum_fwd = 0;
  Real sum_bwd = 0;
  for (long k = 0; k < panels; ++k) {
    const Real a = -cutoff + width * static_cast<Real>(k);
    for (int j = 0; j < 5; ++j) {
      const Real w = a + width / Real(2) * (Real(1) + static_cast<Real>(x5[j]));
      const auto amp = single_photon_amplitudes(TransferOracleParams<Real>::at_offset(p, w));
      const Real weight = static_cast<Real>(w5[j]) * width / Real(2) * square_pulse_spectrum(w, omega);
      sum_fwd += weight * (std::norm(amp.t_fwd) - Real(1));
      sum_bwd += weight * (std::norm(amp.t_bwd) - Real(1));
    }
  }
  return {Real(1) + sum_fwd, Real(1) + sum_bwd};
}

}  // namespace diode
