#pragma once

#include <mutex>
#include <type_traits>

#ifdef QWALK_HAVE_FFTW
#ifndef EIGEN_FFTW_DEFAULT
#define EIGEN_FFTW_DEFAULT
#endif
#include <unsupported/Eigen/FFT>
#include <unsupported/Eigen/src/FFT/ei_kissfft_impl.h>
#else
#include <unsupported/Eigen/FFT>
#endif

namespace qwalk {

// FFTW is only linked for double; every other scalar uses the built-in kissfft.
template <typename Scalar>
struct FftImplFor {
  using type = Eigen::internal::kissfft_impl<Scalar>;
};

#ifdef QWALK_HAVE_FFTW
template <>
struct FftImplFor<double> {
  using type = Eigen::internal::fftw_impl<double>;
};
#endif

template <typename Scalar>
using FftEngine = Eigen::FFT<Scalar, typename FftImplFor<Scalar>::type>;

/// FFTW's planner is not thread-safe; plan creation goes through this lock.
inline std::mutex& fft_planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace qwalk
