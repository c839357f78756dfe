#pragma once

// Demodulator sparsity and the rational-chirp factorization of the AFDM
// Gauss-sum column into a chirp spectrum and a rectangular-window spectrum.

#include <cstdint>
#include <string>
#include <vector>

#include "mcw/types.hpp"

namespace mcw {

/// Relative magnitude above which an entry counts as nonzero.
inline constexpr double kNonzeroTolerance = 1e-9;

struct SparsityReport {
  std::vector<Index> row_counts;
  Index nonzeros = 0;
  double density = 0.0;     // nonzeros / (rows * cols)
  double tolerance = kNonzeroTolerance;
  std::string label;

  Index min_row_count() const;
  Index max_row_count() const;
};

SparsityReport sparsity_profile(const CMatrix& m, double tol = kNonzeroTolerance,
                                std::string label = {});

/// Index positions of entries with magnitude above tol * max magnitude.
std::vector<Index> support(const CVector& v, double tol = kNonzeroTolerance);

struct RationalChirp {
  std::int64_t numerator = 0;     // a
  std::int64_t denominator = 1;   // b > 0, gcd(|a|, b) = 1
  double error = 0.0;             // |q - a/b|

  double value() const { return static_cast<double>(numerator) / static_cast<double>(denominator); }
};

/// Simplest fraction a/b (smallest b) within tol of q, found by
/// continued-fraction descent over [q - tol, q + tol].
RationalChirp rational_chirp_decompose(double q, double tol);

/// Largest sequence length b*N accepted by the appendix checks.
inline constexpr std::int64_t kMaxDecimatedLength = std::int64_t{1} << 20;

/// Max |decimate_b(DFT_bN(windowed chirp)) * sqrt(bN)/sqrt(N) - afdm_inverse_column(N, a/b)|.
double verify_decimation_identity(Index n, const RationalChirp& chirp);

/// Rectangular-window spectrum entry u of the size-bN circulant; Dirichlet
/// kernel with linear phase, value N/sqrt(bN) at u = 0.
cplx rect_window_spectrum(Index n, Index b, Index u);

/// (1/sqrt(bN)) * sum_{k<bN} exp(-j pi a k^2 / (bN)) exp(-2j pi k u / (bN)), direct sum.
cplx chirp_spectrum(Index n, Index b, std::int64_t a, Index u);

/// Decimated circular convolution of the chirp and window spectra, scaled
/// by 1/sqrt(N) so that it reproduces afdm_inverse_column(N, a/b).
CVector decimated_convolution_column(Index n, const RationalChirp& chirp);

}  // namespace mcw
