#include "mcw/channel.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mcw/dft.hpp"
#include "mcw/errors.hpp"

namespace mcw {

bool ChannelSpec::quasi_static() const {
  for (const auto& tap : taps) {
    if (tap.doppler != 0.0) return false;
  }
  return true;
}

ChannelSpec ChannelSpec::identity() {
  ChannelSpec spec;
  spec.taps.push_back(ChannelTap{});
  return spec;
}

namespace {

void check_spec(const ChannelSpec& spec, Index n) {
  if (n < 1) throw DimensionError("channel: N must be >= 1");
  if (spec.taps.empty()) throw ConfigError("channel: at least one tap is required");
  for (const auto& tap : spec.taps) {
    if (tap.delay < 0 || tap.delay >= n) {
      throw ConfigError("channel: tap delay " + std::to_string(tap.delay) + " outside [0," +
                        std::to_string(n) + ")");
    }
  }
}

void check_square(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix");
  }
}

}  // namespace

ChannelMatrix build_channel(const ChannelSpec& spec, Index n) {
  check_spec(spec, n);
  ChannelMatrix out;
  out.spec = spec;
  out.matrix = CMatrix::Zero(n, n);
  for (const auto& tap : spec.taps) {
    // (Delta Pi^l)_{r, r-l} = exp(2j pi theta r / N)
    for (Index r = 0; r < n; ++r) {
      const double angle = 2.0 * kPi * tap.doppler * static_cast<double>(r) / static_cast<double>(n);
      out.matrix(r, (r - tap.delay + n) % n) += tap.gain * std::polar(1.0, angle);
    }
  }
  return out;
}

ChannelSpec realize_random_channel(const ChannelGenerator& gen, Rng& rng) {
  if (gen.tap_count < 1) throw ConfigError("channel generator: tap count must be >= 1");
  if (!(gen.max_doppler >= 0.0)) throw ConfigError("channel generator: max Doppler must be >= 0");
  ChannelSpec spec;
  spec.generator = gen;
  std::uniform_real_distribution<double> doppler(-gen.max_doppler, gen.max_doppler);
  const double variance = 1.0 / static_cast<double>(gen.tap_count);
  for (Index l = 0; l < gen.tap_count; ++l) {
    ChannelTap tap;
    tap.delay = l;
    tap.gain = complex_gaussian(rng, variance);
    tap.doppler = gen.max_doppler > 0.0 ? doppler(rng) : 0.0;
    spec.taps.push_back(tap);
  }
  return spec;
}

CMatrix to_frequency(const CMatrix& m) {
  check_square(m, "to_frequency");
  const CMatrix f = dft_matrix(m.rows());
  return f * m * f.adjoint();
}

CMatrix from_frequency(const CMatrix& m_f) {
  check_square(m_f, "from_frequency");
  const CMatrix f = dft_matrix(m_f.rows());
  return f.adjoint() * m_f * f;
}

Equalizer zf_equalizer(const ChannelMatrix& channel) {
  const CMatrix& h = channel.matrix;
  check_square(h, "zf_equalizer");
  const Eigen::BDCSVD<CMatrix> svd(h);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double condition = smin > 0.0 ? (smax / smin) * (smax / smin)
                                      : std::numeric_limits<double>::infinity();
  if (!(condition <= kMaxZfCondition)) {
    throw EqualizationError("zf_equalizer: H^H H is ill-conditioned", condition);
  }
  Equalizer eq;
  eq.kind = EqualizerKind::ZeroForcing;
  const CMatrix gram = h.adjoint() * h;
  eq.time = gram.ldlt().solve(h.adjoint());
  eq.frequency = to_frequency(eq.time);
  return eq;
}

Equalizer mmse_equalizer(const ChannelMatrix& channel, double rho) {
  if (!(rho >= 0.0)) throw ParameterError("mmse_equalizer: rho must be >= 0");
  if (rho == 0.0) {
    Equalizer eq = zf_equalizer(channel);
    eq.kind = EqualizerKind::Mmse;
    return eq;
  }
  const CMatrix& h = channel.matrix;
  check_square(h, "mmse_equalizer");
  const Index n = h.rows();
  Equalizer eq;
  eq.kind = EqualizerKind::Mmse;
  eq.regularization = rho;
  const CMatrix gram = h.adjoint() * h + rho * CMatrix::Identity(n, n);
  eq.time = gram.llt().solve(h.adjoint());
  eq.frequency = to_frequency(eq.time);
  return eq;
}

CVector apply_channel(const ChannelSpec& spec, const CVector& x) {
  const Index n = x.size();
  check_spec(spec, n);
  CVector y = CVector::Zero(n);
  for (const auto& tap : spec.taps) {
    for (Index r = 0; r < n; ++r) {
      const double angle = 2.0 * kPi * tap.doppler * static_cast<double>(r) / static_cast<double>(n);
      y(r) += tap.gain * std::polar(1.0, angle) * x((r - tap.delay + n) % n);
    }
  }
  return y;
}

CVector frequency_response(const ChannelSpec& spec, Index n) {
  check_spec(spec, n);
  if (!spec.quasi_static()) {
    throw ConfigError("frequency_response: channel has Doppler; F H F^H is not diagonal");
  }
  CVector hf = CVector::Zero(n);
  for (const auto& tap : spec.taps) {
    for (Index k = 0; k < n; ++k) {
      const double angle = -2.0 * kPi * static_cast<double>((k * tap.delay) % n) / static_cast<double>(n);
      hf(k) += tap.gain * std::polar(1.0, angle);
    }
  }
  return hf;
}

CVector per_bin_mmse(const CVector& response, double rho) {
  if (!(rho >= 0.0)) throw ParameterError("per_bin_mmse: rho must be >= 0");
  CVector g(response.size());
  for (Index k = 0; k < response.size(); ++k) {
    const double power = std::norm(response(k));
    const double denom = power + rho;
    g(k) = denom > 0.0 ? std::conj(response(k)) / denom : cplx(0.0, 0.0);
  }
  return g;
}

}  // namespace mcw
