#pragma once

// Brute-force references used only by the tests. Nothing here calls into the
// library's propagation code.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

constexpr double kPi = std::numbers::pi;

/// J_m(x) = (1/2pi) int_0^{2pi} cos(m t - x sin t) dt by the trapezoid rule,
/// which converges geometrically for this periodic integrand.
inline double bessel_quadrature(int m, double x, int points = 512) {
  double s = 0;
  for (int j = 0; j < points; ++j) {
    const double t = 2 * kPi * j / points;
    s += std::cos(m * t - x * std::sin(t));
  }
  return s / points;
}

/// Coin matrix written out by hand.
inline Eigen::Matrix2cd coin(double alpha, double gamma, double chi) {
  const cd i(0, 1);
  Eigen::Matrix2cd m;
  m << std::exp(i * alpha) * std::cos(chi), -std::exp(-i * gamma) * std::sin(chi),
      std::exp(i * gamma) * std::sin(chi), std::exp(-i * alpha) * std::cos(chi);
  return m;
}

/// Layout: index c * M + (n + L), M = 2L + 1.
inline int idx(int c, int n, int L) { return c * (2 * L + 1) + n + L; }

/// Kick on the ring of M sites: <n|exp(-i s k cos theta)|n'> built as a direct
/// DFT sum over the M ring angles (the aliased Bessel series).
inline Mat kick(int L, double k) {
  const int M = 2 * L + 1;
  const cd i(0, 1);
  Mat K = Mat::Zero(2 * M, 2 * M);
  for (int c = 0; c < 2; ++c) {
    const double s = c == 0 ? 1.0 : -1.0;
    for (int n = -L; n <= L; ++n) {
      for (int np = -L; np <= L; ++np) {
        cd sum = 0;
        for (int j = 0; j < M; ++j) {
          const double th = 2 * kPi * j / M;
          sum += std::exp(-i * s * k * std::cos(th)) * std::exp(i * double(n - np) * th);
        }
        K(idx(c, n, L), idx(c, np, L)) = sum / double(M);
      }
    }
  }
  return K;
}

inline Mat free_evolution(int L, double tau, double beta) {
  const int M = 2 * L + 1;
  Mat F = Mat::Zero(2 * M, 2 * M);
  for (int c = 0; c < 2; ++c) {
    for (int n = -L; n <= L; ++n) {
      const double p = n + beta;
      F(idx(c, n, L), idx(c, n, L)) = std::polar(1.0, -tau * p * p / 2);
    }
  }
  return F;
}

inline Mat coin_on_lattice(int L, const Eigen::Matrix2cd& C) {
  const int M = 2 * L + 1;
  Mat out = Mat::Zero(2 * M, 2 * M);
  for (int n = -L; n <= L; ++n) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) out(idx(r, n, L), idx(c, n, L)) = C(r, c);
    }
  }
  return out;
}

/// Relative light-shift phase 2k: coin 0 gets e^{-ik}, coin 1 e^{+ik}.
inline Mat light_shift(int L, double k) {
  const int M = 2 * L + 1;
  Mat D = Mat::Zero(2 * M, 2 * M);
  for (int n = -L; n <= L; ++n) {
    D(idx(0, n, L), idx(0, n, L)) = std::polar(1.0, -k);
    D(idx(1, n, L), idx(1, n, L)) = std::polar(1.0, k);
  }
  return D;
}

/// Ring shift: coin 0 moves n -> n - 1, coin 1 moves n -> n + 1.
inline Mat ideal_shift(int L) {
  const int M = 2 * L + 1;
  Mat S = Mat::Zero(2 * M, 2 * M);
  for (int n = -L; n <= L; ++n) {
    const int down = n - 1 < -L ? L : n - 1;
    const int up = n + 1 > L ? -L : n + 1;
    S(idx(0, down, L), idx(0, n, L)) = 1;
    S(idx(1, up, L), idx(1, n, L)) = 1;
  }
  return S;
}

/// Full kicked-rotor step: light shift (optional) * K * F * coin.
inline Mat kicked_step(int L, const Eigen::Matrix2cd& C, double k, double tau, double beta, bool with_light_shift) {
  Mat U = kick(L, k) * free_evolution(L, tau, beta) * coin_on_lattice(L, C);
  if (with_light_shift) U = light_shift(L, k) * U;
  return U;
}

inline Mat ideal_step(int L, const Eigen::Matrix2cd& C) { return ideal_shift(L) * coin_on_lattice(L, C); }

/// Sum over coin paths for an ideal walk with a fixed coin: amplitude of
/// (c, n) after `steps` steps from the coin spinor `psi0` at n = 0.
inline cd path_sum(const Eigen::Matrix2cd& C, const Eigen::Vector2cd& psi0, int steps, int c_end, int n_end) {
  cd total = 0;
  const int paths = 1 << steps;
  for (int c0 = 0; c0 < 2; ++c0) {
    for (int mask = 0; mask < paths; ++mask) {
      // bit t of mask: coin after step t+1
      cd amp = psi0(c0);
      int prev = c0;
      int n = 0;
      for (int t = 0; t < steps; ++t) {
        const int c = (mask >> t) & 1;
        amp *= C(c, prev);
        n += c == 0 ? -1 : 1;
        prev = c;
      }
      if (prev == c_end && n == n_end) total += amp;
    }
  }
  return total;
}

inline Vec flatten(const Eigen::Array<cd, 2, Eigen::Dynamic, Eigen::RowMajor>& a) {
  const int M = static_cast<int>(a.cols());
  Vec v(2 * M);
  for (int c = 0; c < 2; ++c) {
    for (int j = 0; j < M; ++j) v(c * M + j) = a(c, j);
  }
  return v;
}

}  // namespace oracle
