#include "mcw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "mcw/errors.hpp"
#include "mcw/fft.hpp"
#include "mcw/waveform.hpp"

namespace mcw {

Index SparsityReport::min_row_count() const {
  return row_counts.empty() ? 0 : *std::min_element(row_counts.begin(), row_counts.end());
}

Index SparsityReport::max_row_count() const {
  return row_counts.empty() ? 0 : *std::max_element(row_counts.begin(), row_counts.end());
}

SparsityReport sparsity_profile(const CMatrix& m, double tol, std::string label) {
  if (!(tol > 0.0)) throw ParameterError("sparsity_profile: tol must be positive");
  SparsityReport r;
  r.tolerance = tol;
  r.label = std::move(label);
  const Eigen::MatrixXd mag = m.cwiseAbs();
  const double threshold = tol * (mag.size() ? mag.maxCoeff() : 0.0);
  r.row_counts.resize(static_cast<std::size_t>(m.rows()));
  for (Index i = 0; i < m.rows(); ++i) {
    const Index c = (mag.row(i).array() > threshold).count();
    r.row_counts[static_cast<std::size_t>(i)] = c;
    r.nonzeros += c;
  }
  r.density = m.size() ? static_cast<double>(r.nonzeros) / static_cast<double>(m.size()) : 0.0;
  return r;
}

std::vector<Index> support(const CVector& v, double tol) {
  std::vector<Index> idx;
  if (v.size() == 0) return idx;
  const double threshold = tol * v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > threshold) idx.push_back(i);
  }
  return idx;
}

namespace {

struct Fraction {
  std::int64_t num;
  std::int64_t den;
};

// Simplest fraction in [lo, hi] with 0 <= lo <= hi.
Fraction simplest_between(double lo, double hi, int depth) {
  const double fl = std::floor(lo);
  if (fl == lo) return {static_cast<std::int64_t>(fl), 1};
  if (std::floor(hi) > fl) return {static_cast<std::int64_t>(fl) + 1, 1};
  if (depth > 64) throw ParameterError("rational_chirp_decompose: expansion did not terminate");
  const Fraction rest = simplest_between(1.0 / (hi - fl), 1.0 / (lo - fl), depth + 1);
  return {static_cast<std::int64_t>(fl) * rest.num + rest.den, rest.num};
}

std::int64_t positive_mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

// exp(-j pi a k^2 / M) with the phase reduced modulo 2M in integers.
cplx chirp_phase(std::int64_t a, std::int64_t k, std::int64_t m) {
  const std::int64_t period = 2 * m;
  const std::int64_t kk = positive_mod(k * k, period);
  const std::int64_t e = positive_mod(positive_mod(a, period) * kk, period);
  return std::polar(1.0, -kPi * static_cast<double>(e) / static_cast<double>(m));
}

std::int64_t checked_length(Index n, std::int64_t b) {
  if (n < 1 || b < 1) throw DimensionError("appendix: N and b must be >= 1");
  if (b > kMaxDecimatedLength / n) {
    throw DimensionError("appendix: b*N exceeds " + std::to_string(kMaxDecimatedLength));
  }
  return b * static_cast<std::int64_t>(n);
}

}  // namespace

RationalChirp rational_chirp_decompose(double q, double tol) {
  if (!(tol > 0.0)) throw ParameterError("rational_chirp_decompose: tol must be positive");
  if (!std::isfinite(q)) throw ParameterError("rational_chirp_decompose: q must be finite");
  const double lo = q - tol;
  const double hi = q + tol;
  Fraction f{0, 1};
  if (lo <= 0.0 && hi >= 0.0) {
    f = {0, 1};
  } else if (lo > 0.0) {
    f = simplest_between(lo, hi, 0);
  } else {
    f = simplest_between(-hi, -lo, 0);
    f.num = -f.num;
  }
  const double bound = std::ceil(1.0 / tol);
  if (f.den < 1 || static_cast<double>(f.den) > bound) {
    // Rounding in the reciprocal steps; fall back to the grid of step 1/bound.
    const auto den = static_cast<std::int64_t>(bound);
    f = {static_cast<std::int64_t>(std::llround(q * bound)), den};
  }
  const std::int64_t g = std::gcd(f.num < 0 ? -f.num : f.num, f.den);
  RationalChirp r;
  r.numerator = g ? f.num / g : f.num;
  r.denominator = g ? f.den / g : f.den;
  r.error = std::abs(q - r.value());
  return r;
}

double verify_decimation_identity(Index n, const RationalChirp& chirp) {
  const std::int64_t b = chirp.denominator;
  const std::int64_t len = checked_length(n, b);
  CVector windowed = CVector::Zero(static_cast<Index>(len));
  for (std::int64_t k = 0; k < n; ++k) windowed(static_cast<Index>(k)) = chirp_phase(chirp.numerator, k, len);
  const CVector spectrum = unitary_fft(windowed);
  // The size-bN transform carries 1/sqrt(bN); the Gauss-sum column carries 1/sqrt(N).
  const double scale = std::sqrt(static_cast<double>(len)) / std::sqrt(static_cast<double>(n));
  const CVector column = afdm_inverse_column(n, chirp.value());
  double err = 0.0;
  for (Index u = 0; u < n; ++u) {
    err = std::max(err, std::abs(scale * spectrum(static_cast<Index>(b) * u) - column(u)));
  }
  return err;
}

cplx rect_window_spectrum(Index n, Index b, Index u) {
  const std::int64_t len = checked_length(n, b);
  if (u < 0 || u >= len) throw IndexError("rect_window_spectrum: u outside [0, bN)");
  const double root = std::sqrt(static_cast<double>(len));
  if (u == 0) return {static_cast<double>(n) / root, 0.0};
  const double ud = static_cast<double>(u);
  const double bd = static_cast<double>(b);
  const double phase = -kPi * ud * (1.0 / bd - 1.0 / static_cast<double>(len));
  const double kernel = std::sin(kPi * ud / bd) / std::sin(kPi * ud / static_cast<double>(len));
  return std::polar(1.0, phase) * (kernel / root);
}

cplx chirp_spectrum(Index n, Index b, std::int64_t a, Index u) {
  const std::int64_t len = checked_length(n, b);
  if (u < 0 || u >= len) throw IndexError("chirp_spectrum: u outside [0, bN)");
  cplx acc(0.0, 0.0);
  for (std::int64_t k = 0; k < len; ++k) {
    const double angle = -2.0 * kPi * static_cast<double>(positive_mod(k * u, len)) / static_cast<double>(len);
    acc += chirp_phase(a, k, len) * std::polar(1.0, angle);
  }
  return acc / std::sqrt(static_cast<double>(len));
}

CVector decimated_convolution_column(Index n, const RationalChirp& chirp) {
  const std::int64_t b = chirp.denominator;
  const std::int64_t len = checked_length(n, b);
  if (len > kMaxDenseSize) throw DimensionError("decimated_convolution_column: b*N too large");
  const auto m = static_cast<Index>(len);
  CVector chirp_col(m), window_col(m);
  for (Index u = 0; u < m; ++u) {
    chirp_col(u) = chirp_spectrum(n, static_cast<Index>(b), chirp.numerator, u);
    window_col(u) = rect_window_spectrum(n, static_cast<Index>(b), u);
  }
  CVector out(n);
  for (Index u = 0; u < n; ++u) {
    const Index row = static_cast<Index>(b) * u;
    cplx acc(0.0, 0.0);
    for (Index j = 0; j < m; ++j) acc += chirp_col((row - j + m) % m) * window_col(j);
    out(u) = acc / std::sqrt(static_cast<double>(n));
  }
  return out;
}

}  // namespace mcw
