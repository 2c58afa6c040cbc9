#pragma once

#include <cmath>
#include <complex>
#include <numbers>

#include <Eigen/Dense>

#include "qwalk/errors.hpp"

namespace qwalk {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Matrix2c = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using Vector2c = Eigen::Matrix<Complex<Scalar>, 2, 1>;

template <typename Scalar>
constexpr Scalar deg_to_rad(Scalar degrees) {
  return degrees * std::numbers::pi_v<Scalar> / Scalar(180);
}

template <typename Scalar>
constexpr Scalar rad_to_deg(Scalar radians) {
  return radians * Scalar(180) / std::numbers::pi_v<Scalar>;
}

/// SU(2) coin rotation
///
///   M(alpha, gamma, chi) = [  e^{i alpha} cos chi   -e^{-i gamma} sin chi ]
///                          [  e^{i gamma} sin chi    e^{-i alpha} cos chi ]
///
/// acting on the coin basis (|0>, |1>). Angles are in radians. The entries
/// are computed once at construction; the object is immutable afterwards.
template <typename Scalar>
class CoinMatrix {
 public:
  CoinMatrix() : CoinMatrix(Scalar(0), Scalar(0), Scalar(0)) {}

  CoinMatrix(Scalar alpha, Scalar gamma, Scalar chi)
      : alpha_(alpha), gamma_(gamma), chi_(chi) {
    if (!std::isfinite(alpha) || !std::isfinite(gamma) || !std::isfinite(chi)) {
      throw InvalidArgument("coin angles must be finite");
    }
    const Scalar c = std::cos(chi);
    const Scalar s = std::sin(chi);
    const Complex<Scalar> ea = std::polar(Scalar(1), alpha);
    const Complex<Scalar> eg = std::polar(Scalar(1), gamma);
    m_(0, 0) = ea * c;
    m_(0, 1) = -std::conj(eg) * s;
    m_(1, 0) = eg * s;
    m_(1, 1) = std::conj(ea) * c;
  }

  Scalar alpha() const { return alpha_; }
  Scalar gamma() const { return gamma_; }
  Scalar chi() const { return chi_; }

  const Matrix2c<Scalar>& matrix() const { return m_; }
  const Complex<Scalar>& operator()(int row, int col) const { return m_(row, col); }

  /// Same mixing angle and alpha, phase gamma shifted by `delta`.
  CoinMatrix with_gamma_offset(Scalar delta) const {
    return CoinMatrix(alpha_, gamma_ + delta, chi_);
  }

  Vector2c<Scalar> operator*(const Vector2c<Scalar>& v) const { return m_ * v; }

 private:
  Scalar alpha_;
  Scalar gamma_;
  Scalar chi_;
  Matrix2c<Scalar> m_;
};

template <typename Scalar>
CoinMatrix<Scalar> make_coin(Scalar alpha, Scalar gamma, Scalar chi) {
  return CoinMatrix<Scalar>(alpha, gamma, chi);
}

template <typename Scalar>
CoinMatrix<Scalar> make_coin_degrees(Scalar alpha_deg, Scalar gamma_deg, Scalar chi_deg) {
  return CoinMatrix<Scalar>(deg_to_rad(alpha_deg), deg_to_rad(gamma_deg), deg_to_rad(chi_deg));
}

using CoinMatrixd = CoinMatrix<double>;

}  // namespace qwalk
