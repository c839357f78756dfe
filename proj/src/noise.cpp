#include "mcw/noise.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "mcw/channel.hpp"
#include "mcw/errors.hpp"

namespace mcw {

std::string to_string(NoiseKind kind) {
  switch (kind) {
    case NoiseKind::White: return "white";
    case NoiseKind::Impulse: return "impulse";
    case NoiseKind::Interferer: return "interferer";
    case NoiseKind::Equalized: return "equalized";
  }
  return "?";
}

NoiseKind noise_kind_from_string(const std::string& name) {
  std::string low;
  for (char ch : name) low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (low == "white") return NoiseKind::White;
  if (low == "impulse") return NoiseKind::Impulse;
  if (low == "interferer") return NoiseKind::Interferer;
  if (low == "equalized") return NoiseKind::Equalized;
  throw ConfigError("unknown noise profile '" + name + "'");
}

namespace {

void check_fraction(double f, const char* what) {
  if (!(f >= 0.0 && f <= 1.0)) {
    throw ParameterError(std::string(what) + ": power fraction must lie in [0, 1]");
  }
}

RVector normalized(RVector g) {
  const double total = g.sum();
  if (!(total > 0.0)) throw ParameterError("noise profile: total power must be positive");
  return g * (static_cast<double>(g.size()) / total);
}

// `selected` bins carry `fraction` of the power with relative weights `w`;
// the other bins share the rest uniformly.
RVector concentrate(Index n, const std::vector<Index>& selected, const std::vector<double>& w,
                    double fraction) {
  const Index others = n - static_cast<Index>(selected.size());
  if (others == 0) return RVector::Ones(n);
  RVector g = RVector::Constant(n, (1.0 - fraction) * static_cast<double>(n) / static_cast<double>(others));
  double wsum = 0.0;
  for (double x : w) wsum += x;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    g(selected[i]) = fraction * static_cast<double>(n) * w[i] / wsum;
  }
  return g;
}

RVector impulse_gains(Index n, const ImpulseParams& p) {
  check_fraction(p.power_fraction, "impulse");
  const Index count = p.count.value_or(std::max<Index>(1, n / 32));
  if (count < 1 || count > n) throw ParameterError("impulse: bin count must lie in [1, N]");
  const Index spacing = n / count;
  std::vector<Index> bins;
  for (Index i = 0; i < count; ++i) bins.push_back(((p.offset + i * spacing) % n + n) % n);
  return concentrate(n, bins, std::vector<double>(bins.size(), 1.0), p.power_fraction);
}

RVector interferer_gains(Index n, const InterfererParams& p) {
  check_fraction(p.power_fraction, "interferer");
  const Index width = p.width.value_or(std::max<Index>(1, n / 8));
  if (width < 1 || width > n) throw ParameterError("interferer: width must lie in [1, N]");
  const Index start = p.start.value_or(n / 4);
  std::vector<Index> bins;
  std::vector<double> weights;
  const double centre = 0.5 * static_cast<double>(width - 1);
  const double spread = 0.25 * static_cast<double>(width);
  for (Index i = 0; i < width; ++i) {
    bins.push_back(((start + i) % n + n) % n);
    if (p.taper == InterfererTaper::Bell) {
      const double d = (static_cast<double>(i) - centre) / spread;
      weights.push_back(std::exp(-0.5 * d * d));
    } else {
      weights.push_back(1.0);
    }
  }
  return concentrate(n, bins, weights, p.power_fraction);
}

RVector equalized_gains(Index n, const EqualizedParams& p) {
  if (!(p.cap > 0.0)) throw ParameterError("equalized: cap must be positive");
  ChannelSpec spec;
  if (!p.taps.empty()) {
    for (std::size_t l = 0; l < p.taps.size(); ++l) {
      spec.taps.push_back(ChannelTap{static_cast<Index>(l), p.taps[l], 0.0});
    }
  } else {
    if (p.tap_count < 1) throw ParameterError("equalized: tap count must be >= 1");
    Rng rng = make_stream(p.seed, 0);
    spec = realize_random_channel(ChannelGenerator{p.tap_count, 0.0}, rng);
  }
  if (static_cast<Index>(spec.taps.size()) > n) throw ParameterError("equalized: more taps than bins");
  const CVector hf = frequency_response(spec, n);
  RVector g(n);
  for (Index k = 0; k < n; ++k) {
    const double power = std::norm(hf(k));
    g(k) = power > 0.0 ? std::min(1.0 / power, p.cap) : p.cap;
  }
  return g;
}

}  // namespace

NoiseProfile make_profile(NoiseKind kind, Index n, const ProfileParams& params) {
  if (n < 1) throw DimensionError("make_profile: N must be >= 1");
  NoiseProfile profile;
  profile.kind = kind;
  profile.params = params;
  switch (kind) {
    case NoiseKind::White: profile.gains = RVector::Ones(n); break;
    case NoiseKind::Impulse: profile.gains = normalized(impulse_gains(n, params.impulse)); break;
    case NoiseKind::Interferer: profile.gains = normalized(interferer_gains(n, params.interferer)); break;
    case NoiseKind::Equalized: profile.gains = normalized(equalized_gains(n, params.equalized)); break;
  }
  return profile;
}

NoiseProfile custom_profile(const RVector& gains) {
  if (gains.size() < 1) throw DimensionError("custom_profile: empty gain vector");
  if ((gains.array() < 0.0).any()) throw ParameterError("custom_profile: gains must be >= 0");
  NoiseProfile profile;
  profile.gains = normalized(gains);
  return profile;
}

NoiseSample sample_noise(const NoiseProfile& profile, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw ParameterError("sample_noise: sigma must be >= 0");
  NoiseSample s;
  s.sigma = sigma;
  const Index n = profile.size();
  s.values.resize(n);
  for (Index k = 0; k < n; ++k) {
    s.values(k) = std::sqrt(profile.gains(k)) * complex_gaussian(rng, sigma * sigma);
  }
  return s;
}

RVector demod_noise_variance(const CMatrix& q_inv, const NoiseProfile& profile, double sigma) {
  if (q_inv.rows() != q_inv.cols() || q_inv.cols() != profile.size()) {
    throw DimensionError("demod_noise_variance: Q^-1 is " + std::to_string(q_inv.rows()) + "x" +
                         std::to_string(q_inv.cols()) + ", profile has " +
                         std::to_string(profile.size()) + " bins");
  }
  return sigma * sigma * (q_inv.cwiseAbs2() * profile.gains);
}

WhiteningReport whitening_report(const RVector& variances, std::string label) {
  WhiteningReport r;
  r.variances = variances;
  r.mean = variances.size() ? variances.mean() : 0.0;
  r.std_dev = variances.size() ? whitening_std(variances) : 0.0;
  r.label = std::move(label);
  return r;
}

}  // namespace mcw
