// Test-only oracle: two atoms as explicit 4x4 matrices, Fock-state input handled with the
// generalized master equations for the blocks rho_{m,n}. Shares no code with the hierarchy.

#pragma once

#include <cmath>
#include <complex>
#include <algorithm>
#include <map>
#include <utility>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::Matrix<cd, 4, 4>;
using SuperOp = Eigen::Matrix<cd, 16, 16>;
using Vec16 = Eigen::Matrix<cd, 16, 1>;

struct Atoms {
  Mat id, s1, s2, z1, z2, n1, n2;

  Atoms() {
    Eigen::Matrix2cd lower = Eigen::Matrix2cd::Zero();  // basis (|e>, |g>)
    lower(1, 0) = 1;
    Eigen::Matrix2cd z = Eigen::Matrix2cd::Zero();
    z(0, 0) = 1;
    z(1, 1) = -1;
    const Eigen::Matrix2cd i2 = Eigen::Matrix2cd::Identity();
    id = Mat::Identity();
    s1 = Eigen::kroneckerProduct(lower, i2);
    s2 = Eigen::kroneckerProduct(i2, lower);
    z1 = Eigen::kroneckerProduct(z, i2);
    z2 = Eigen::kroneckerProduct(i2, z);
    n1 = s1.adjoint() * s1;
    n2 = s2.adjoint() * s2;
  }

  Mat ground() const {
    Mat g = Mat::Zero();
    g(3, 3) = 1;
    return g;
  }
};

/// Device in the frame rotating at the carrier: left atom detuned by -delta, right atom resonant.
struct Device {
  double gamma{1};
  double delta{0};
  double theta{0};

  Atoms at{};
  Mat H() const {
    return -delta * at.n1 + gamma * std::sin(theta) * (at.s1.adjoint() * at.s2 + at.s2.adjoint() * at.s1);
  }
  Mat La() const { return std::sqrt(gamma) * (at.s1 + std::exp(cd(0, -theta)) * at.s2); }
  Mat Lb() const { return std::sqrt(gamma) * (at.s1 + std::exp(cd(0, theta)) * at.s2); }
};

inline SuperOp left(const Mat& a) { return Eigen::kroneckerProduct(Mat::Identity(), a); }   // vec(a X)
inline SuperOp right(const Mat& b) { return Eigen::kroneckerProduct(b.transpose(), Mat::Identity()); }  // vec(X b)

inline Vec16 vec(const Mat& m) { return Eigen::Map<const Vec16>(m.data()); }
inline Mat unvec(const Vec16& v) { return Eigen::Map<const Mat>(v.data()); }

inline SuperOp lindbladian(const Device& d) {
  const cd i(0, 1);
  const Mat H = d.H();
  SuperOp L = -i * (left(H) - right(H));
  for (const Mat& c : {d.La(), d.Lb()}) {
    const Mat cdc = c.adjoint() * c;
    L += left(c) * right(c.adjoint()) - 0.5 * (left(cdc) + right(cdc));
  }
  return L;
}

/// Fock-input block equations:
/// d rho_{m,n} = Lin rho_{m,n} + sqrt(m) xi [rho_{m-1,n}, L^+] + sqrt(n) conj(xi) [L, rho_{m,n-1}]
class FockMasterEquation {
 public:
  FockMasterEquation(const Device& d, int n, bool left_input, cd xi)
      : d_(d), n_(n), xi_(xi), L_(left_input ? d.La() : d.Lb()), lin_(lindbladian(d)) {}

  Mat drive(int m, int n, const std::map<std::pair<int, int>, Mat>& rho) const {
    Mat src = Mat::Zero();
    if (m > 0) {
      const Mat& r = rho.at({m - 1, n});
      src += std::sqrt(double(m)) * xi_ * (r * L_.adjoint() - L_.adjoint() * r);
    }
    if (n > 0) {
      const Mat& r = rho.at({m, n - 1});
      src += std::sqrt(double(n)) * std::conj(xi_) * (L_ * r - r * L_);
    }
    return src;
  }

  /// Steady blocks under a constant envelope; tr rho_{m,n} = delta_mn fixes the null direction.
  std::map<std::pair<int, int>, Mat> steady() const {
    std::map<std::pair<int, int>, Mat> rho;
    Eigen::Matrix<cd, 17, 16> A;
    A.topRows<16>() = lin_;
    A.row(16) = vec(Mat::Identity()).transpose();
    const auto qr = A.colPivHouseholderQr();
    for (int s = 0; s <= 2 * n_; ++s)
      for (int m = std::max(0, s - n_); m <= std::min(s, n_); ++m) {
        const int n = s - m;
        Eigen::Matrix<cd, 17, 1> b;
        b.head<16>() = -vec(drive(m, n, rho));
        b(16) = m == n ? 1.0 : 0.0;
        rho[{m, n}] = unvec(qr.solve(b));
      }
    return rho;
  }

  /// Fixed-step RK4 from the ground state; envelope xi on [0, duration], zero afterwards.
  /// Returns the integral of rho_{n,n} over [0, end]. Pick dt so that duration / dt is an integer.
  Mat integrate_diagonal(double duration, double end, double dt) const {
    using Blocks = std::map<std::pair<int, int>, Mat>;
    const std::pair<int, int> acc_key{-1, -1};
    Blocks rho;
    for (int m = 0; m <= n_; ++m)
      for (int n = 0; n <= n_; ++n) rho[{m, n}] = m == n ? d_.at.ground() : Mat::Zero();
    rho[acc_key] = Mat::Zero();
    auto rate = [&](const Blocks& r, bool on) {
      Blocks out;
      for (const auto& [key, val] : r) {
        if (key == acc_key) continue;
        Mat dr = unvec(lin_ * vec(val));
        if (on) dr += drive(key.first, key.second, r);
        out[key] = dr;
      }
      out[acc_key] = r.at({n_, n_});
      return out;
    };
    auto axpy = [](const Blocks& a, double h, const Blocks& k) {
      auto out = a;
      for (auto& [key, val] : out) val += h * k.at(key);
      return out;
    };
    const long steps = static_cast<long>(std::llround(end / dt));
    for (long k = 0; k < steps; ++k) {
      const bool on = (static_cast<double>(k) + 0.5) * dt < duration;
      const auto k1 = rate(rho, on);
      const auto k2 = rate(axpy(rho, 0.5 * dt, k1), on);
      const auto k3 = rate(axpy(rho, 0.5 * dt, k2), on);
      const auto k4 = rate(axpy(rho, dt, k3), on);
      for (auto& [key, val] : rho) val += dt / 6.0 * (k1.at(key) + 2.0 * k2.at(key) + 2.0 * k3.at(key) + k4.at(key));
    }
    return rho.at(acc_key);
  }

 private:
  Device d_;
  int n_;
  cd xi_;
  Mat L_;
  SuperOp lin_;
};

}  // namespace oracle
