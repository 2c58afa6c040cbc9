#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include "qwalk/coin.hpp"
#include "qwalk/errors.hpp"

namespace qwalk {

/// J_m(x) for integer m of either sign, x >= 0.
inline double bessel_j(int m, double x) {
  const int order = m < 0 ? -m : m;
  const double value = std::cyl_bessel_j(static_cast<double>(order), x);
  return (m < 0 && (order % 2 != 0)) ? -value : value;
}

/// <n + dn| exp(-i sign k cos theta) |n> = (-i sign)^dn J_dn(k).
inline std::complex<double> kick_matrix_element(double k, int dn, int sign) {
  if (!(k >= 0)) throw InvalidArgument("kick strength must be >= 0");
  if (sign != 1 && sign != -1) throw InvalidArgument("kick sign must be +1 or -1");
  static constexpr std::complex<double> kPowers[4] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  const int q = ((sign * dn) % 4 + 4) % 4;  // (-i)^(sign dn) == (-i sign)^dn for sign = +-1
  return kPowers[q] * bessel_j(dn, k);
}

/// Truncated Jacobi-Anger kernel c_m = (-i sign)^m J_m(k), m in [-B, B], where
/// B is the smallest order with |J_B(k)| below `cutoff`.
class KickKernel {
 public:
  KickKernel(double k, int sign, double cutoff = 1e-14) : k_(k), sign_(sign) {
    if (!(k >= 0) || !std::isfinite(k)) throw InvalidArgument("kick strength must be finite and >= 0");
    bandwidth_ = 0;
    while (std::abs(bessel_j(bandwidth_, k)) >= cutoff) ++bandwidth_;
    coefficients_.resize(2 * bandwidth_ + 1);
    for (int m = -bandwidth_; m <= bandwidth_; ++m) {
      coefficients_[m + bandwidth_] = kick_matrix_element(k, m, sign);
    }
  }

  double k() const { return k_; }
  int sign() const { return sign_; }
  int bandwidth() const { return bandwidth_; }
  std::complex<double> operator[](int m) const { return coefficients_[m + bandwidth_]; }
  const std::vector<std::complex<double>>& coefficients() const { return coefficients_; }

 private:
  double k_;
  int sign_;
  int bandwidth_ = 0;
  std::vector<std::complex<double>> coefficients_;
};

}  // namespace qwalk
