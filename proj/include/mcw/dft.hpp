#pragma once

// Dense transform building blocks shared by every waveform. All transforms
// use the unitary 1/sqrt(N) normalization in both directions.

#include <cmath>
#include <string>

#include "mcw/errors.hpp"
#include "mcw/types.hpp"

namespace mcw {

/// Unitary DFT matrix with entry (n, m) = exp(-2j*pi*n*m/N) / sqrt(N).
template <typename Real = double>
ComplexMatrix<Real> dft_matrix(Index n) {
  if (n < 1) throw DimensionError("dft_matrix: size must be >= 1, got " + std::to_string(n));
  ComplexMatrix<Real> f(n, n);
  const Real scale = Real(1) / std::sqrt(static_cast<Real>(n));
  for (Index r = 0; r < n; ++r) {
    for (Index c = 0; c < n; ++c) {
      // Reduce n*m mod N before forming the angle to keep large-N phases exact.
      const auto k = static_cast<Real>((r * c) % n);
      const Real angle = Real(-2) * static_cast<Real>(kPi) * k / static_cast<Real>(n);
      f(r, c) = std::polar(scale, angle);
    }
  }
  return f;
}

/// Diagonal of the discrete chirp exp(j*pi*c*n^2/N), n = 0..N-1.
template <typename Real = double>
ComplexVector<Real> chirp_diagonal(Index n, Real c) {
  ComplexVector<Real> d(n);
  for (Index k = 0; k < n; ++k) {
    // n^2 mod 2N is exact for integer c; for real c the full product is needed.
    const Real kk = static_cast<Real>(k) * static_cast<Real>(k);
    d(k) = std::polar(Real(1), static_cast<Real>(kPi) * c * kk / static_cast<Real>(n));
  }
  return d;
}

/// Forward cyclic shift: (Pi x)_n = x_{n-1 mod N}.
template <typename Real = double>
ComplexMatrix<Real> cyclic_shift_matrix(Index n, Index shift = 1) {
  ComplexMatrix<Real> p = ComplexMatrix<Real>::Zero(n, n);
  const Index s = ((shift % n) + n) % n;
  for (Index r = 0; r < n; ++r) p(r, (r - s + n) % n) = Real(1);
  return p;
}

/// Largest entrywise magnitude of a matrix expression.
template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

}  // namespace mcw
