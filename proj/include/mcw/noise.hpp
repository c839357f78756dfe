#pragma once

// Non-white Gaussian noise with diagonal frequency-domain covariance
// sigma_w^2 * Gamma_f, and its variance after a demodulation matrix.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mcw/random.hpp"
#include "mcw/types.hpp"

namespace mcw {

enum class NoiseKind { White, Impulse, Interferer, Equalized };

std::string to_string(NoiseKind kind);
NoiseKind noise_kind_from_string(const std::string& name);

enum class InterfererTaper { Flat, Bell };

struct ImpulseParams {
  std::optional<Index> count;   // default max(1, N/32)
  Index offset = 0;
  double power_fraction = 0.9;
};

struct InterfererParams {
  std::optional<Index> width;   // default max(1, N/8)
  std::optional<Index> start;   // default N/4
  double power_fraction = 0.9;
  // Gaussian taper across the block (sigma = width/4). A flat block of
  // width N/8 is whitened perfectly by OTFS with K = 8, so Bell is the default.
  InterfererTaper taper = InterfererTaper::Bell;
};

struct EqualizedParams {
  Index tap_count = 4;
  std::uint64_t seed = 4;
  double cap = 1e4;
  std::vector<cplx> taps;       // explicit taps override the seeded draw
};

struct ProfileParams {
  ImpulseParams impulse;
  InterfererParams interferer;
  EqualizedParams equalized;
};

struct NoiseProfile {
  RVector gains;                // gamma_n^2, sum = N
  NoiseKind kind = NoiseKind::White;
  ProfileParams params;

  Index size() const { return gains.size(); }
  double trace() const { return gains.sum(); }
};

struct NoiseSample {
  CVector values;               // w_f
  double sigma = 0.0;
};

struct WhiteningReport {
  RVector variances;
  double mean = 0.0;
  double std_dev = 0.0;
  std::string label;
};

NoiseProfile make_profile(NoiseKind kind, Index n, const ProfileParams& params = {});

/// Rescale gains so they sum to N. Throws on negative or all-zero gains.
NoiseProfile custom_profile(const RVector& gains);

/// w_f = Gamma_f^{1/2} w_w, w_w i.i.d. CN(0, sigma^2).
NoiseSample sample_noise(const NoiseProfile& profile, double sigma, Rng& rng);

/// v_m = sigma^2 * sum_v |(Q^-1)_{m,v}|^2 gamma_v^2.
RVector demod_noise_variance(const CMatrix& q_inv, const NoiseProfile& profile, double sigma);

/// Population standard deviation of v around its mean.
template <typename Derived>
double whitening_std(const Eigen::MatrixBase<Derived>& v) {
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().mean());
}

WhiteningReport whitening_report(const RVector& variances, std::string label);

}  // namespace mcw
