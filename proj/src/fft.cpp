#include "mcw/fft.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace mcw {
namespace {

Eigen::FFT<double>& local_fft() {
  thread_local Eigen::FFT<double> fft = [] {
    Eigen::FFT<double> f;
    f.SetFlag(Eigen::FFT<double>::Unscaled);
    return f;
  }();
  return fft;
}

}  // namespace

CVector unitary_fft(const CVector& x) {
  if (x.size() <= 1) return x;
  CVector out(x.size());
  local_fft().fwd(out, x);
  return out / std::sqrt(static_cast<double>(x.size()));
}

CVector unitary_ifft(const CVector& x) {
  if (x.size() <= 1) return x;
  CVector out(x.size());
  local_fft().inv(out, x);
  return out / std::sqrt(static_cast<double>(x.size()));
}

}  // namespace mcw
