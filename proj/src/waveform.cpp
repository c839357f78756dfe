#include "mcw/waveform.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>

#include <unsupported/Eigen/KroneckerProduct>

#include "mcw/dft.hpp"
#include "mcw/fft.hpp"

namespace mcw {

std::string to_string(WaveformKind kind) {
  switch (kind) {
    case WaveformKind::Ofdm: return "OFDM";
    case WaveformKind::Otfs: return "OTFS";
    case WaveformKind::Afdm: return "AFDM";
  }
  return "?";
}

WaveformKind waveform_kind_from_string(const std::string& name) {
  std::string up;
  for (char ch : name) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(ch))));
  if (up == "OFDM") return WaveformKind::Ofdm;
  if (up == "OTFS") return WaveformKind::Otfs;
  if (up == "AFDM") return WaveformKind::Afdm;
  throw ConfigError("unknown waveform '" + name + "'");
}

WaveformConfig WaveformConfig::ofdm(Index n) {
  WaveformConfig cfg;
  cfg.kind = WaveformKind::Ofdm;
  cfg.size = n;
  cfg.validate();
  return cfg;
}

WaveformConfig WaveformConfig::otfs(Index delay_bins, Index doppler_bins) {
  WaveformConfig cfg;
  cfg.kind = WaveformKind::Otfs;
  cfg.delay_bins = delay_bins;
  cfg.doppler_bins = doppler_bins;
  cfg.size = delay_bins * doppler_bins;
  cfg.validate();
  return cfg;
}

WaveformConfig WaveformConfig::otfs_with_doppler(Index n, Index doppler_bins) {
  if (doppler_bins < 1 || n % doppler_bins != 0) {
    throw ConfigError("OTFS: L=" + std::to_string(doppler_bins) + " does not divide N=" +
                      std::to_string(n));
  }
  return otfs(n / doppler_bins, doppler_bins);
}

WaveformConfig WaveformConfig::afdm(Index n, double q, double alpha) {
  WaveformConfig cfg;
  cfg.kind = WaveformKind::Afdm;
  cfg.size = n;
  cfg.chirp_q = q;
  cfg.chirp_alpha = alpha;
  cfg.validate();
  return cfg;
}

void WaveformConfig::validate() const {
  if (size < 1) throw ConfigError("waveform: N must be >= 1, got " + std::to_string(size));
  switch (kind) {
    case WaveformKind::Ofdm:
      break;
    case WaveformKind::Otfs:
      if (delay_bins < 1 || doppler_bins < 1 || delay_bins * doppler_bins != size) {
        throw ConfigError("OTFS: K*L must equal N (K=" + std::to_string(delay_bins) +
                          ", L=" + std::to_string(doppler_bins) + ", N=" + std::to_string(size) +
                          ")");
      }
      break;
    case WaveformKind::Afdm:
      if (!std::isfinite(chirp_q) || !std::isfinite(chirp_alpha)) {
        throw ConfigError("AFDM: q and alpha must be finite");
      }
      break;
  }
}

std::string WaveformConfig::label() const {
  char buf[96];
  switch (kind) {
    case WaveformKind::Ofdm:
      return "OFDM";
    case WaveformKind::Otfs:
      std::snprintf(buf, sizeof buf, "OTFS(K=%lld,L=%lld)", static_cast<long long>(delay_bins),
                    static_cast<long long>(doppler_bins));
      return buf;
    case WaveformKind::Afdm:
      std::snprintf(buf, sizeof buf, "AFDM(q=%g,alpha=%g)", chirp_q, chirp_alpha);
      return buf;
  }
  return "?";
}

PrecoderMatrix build_precoder(const WaveformConfig& cfg) {
  cfg.validate();
  const Index n = cfg.size;
  if (n > kMaxDenseSize) {
    throw DimensionError("build_precoder: N=" + std::to_string(n) +
                         " exceeds the dense limit; use Precoder");
  }
  PrecoderMatrix out;
  out.config = cfg;
  switch (cfg.kind) {
    case WaveformKind::Ofdm:
      out.forward = CMatrix::Identity(n, n);
      break;
    case WaveformKind::Otfs: {
      const CMatrix grid = Eigen::kroneckerProduct(dft_matrix(cfg.doppler_bins).adjoint().eval(),
                                                   CMatrix::Identity(cfg.delay_bins, cfg.delay_bins));
      out.forward = dft_matrix(n) * grid;
      break;
    }
    case WaveformKind::Afdm: {
      const CMatrix f = dft_matrix(n);
      out.forward = f * chirp_diagonal(n, cfg.chirp_q).asDiagonal() * f.adjoint() *
                    chirp_diagonal(n, cfg.chirp_alpha).asDiagonal();
      break;
    }
  }
  // Every precoder is a product of unitary factors.
  out.inverse = out.forward.adjoint();
  return out;
}

namespace {

// Apply a unitary DFT (or its inverse) along the Doppler axis of the K x L
// grid stored column-major in v: (F_L (x) I_K) v or (F_L^H (x) I_K) v.
CVector doppler_transform(const CVector& v, Index delay_bins, Index doppler_bins, bool inverse) {
  CVector out(v.size());
  CVector row(doppler_bins);
  for (Index k = 0; k < delay_bins; ++k) {
    for (Index l = 0; l < doppler_bins; ++l) row(l) = v(k + delay_bins * l);
    const CVector t = inverse ? unitary_ifft(row) : unitary_fft(row);
    for (Index l = 0; l < doppler_bins; ++l) out(k + delay_bins * l) = t(l);
  }
  return out;
}

void check_length(const WaveformConfig& cfg, Index got, const char* what) {
  if (got != cfg.size) {
    throw DimensionError(std::string(what) + ": expected length " + std::to_string(cfg.size) +
                         ", got " + std::to_string(got));
  }
}

}  // namespace

Precoder::Precoder(const WaveformConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.kind == WaveformKind::Afdm) {
    chirp_q_ = chirp_diagonal(cfg_.size, cfg_.chirp_q);
    chirp_alpha_ = chirp_diagonal(cfg_.size, cfg_.chirp_alpha);
  }
}

CVector Precoder::to_time(const CVector& data) const {
  check_length(cfg_, data.size(), "modulate");
  switch (cfg_.kind) {
    case WaveformKind::Ofdm:
      return unitary_ifft(data);
    case WaveformKind::Otfs:
      return doppler_transform(data, cfg_.delay_bins, cfg_.doppler_bins, true);
    case WaveformKind::Afdm:
      return chirp_q_.cwiseProduct(unitary_ifft(chirp_alpha_.cwiseProduct(data)));
  }
  return {};
}

CVector Precoder::apply(const CVector& data) const {
  check_length(cfg_, data.size(), "precode");
  if (cfg_.kind == WaveformKind::Ofdm) return data;
  return unitary_fft(to_time(data));
}

CVector Precoder::apply_inverse(const CVector& precoded) const {
  check_length(cfg_, precoded.size(), "demodulate");
  switch (cfg_.kind) {
    case WaveformKind::Ofdm:
      return precoded;
    case WaveformKind::Otfs:
      return doppler_transform(unitary_ifft(precoded), cfg_.delay_bins, cfg_.doppler_bins, false);
    case WaveformKind::Afdm: {
      const CVector t = chirp_q_.conjugate().cwiseProduct(unitary_ifft(precoded));
      return chirp_alpha_.conjugate().cwiseProduct(unitary_fft(t));
    }
  }
  return {};
}

TimeSignal modulate(const WaveformConfig& cfg, const DataSignal& data) {
  return TimeSignal(Precoder(cfg).to_time(data.values));
}

DataSignal demodulate(const WaveformConfig& cfg, const FrequencySignal& received) {
  return DataSignal(Precoder(cfg).apply_inverse(received.values));
}

cplx otfs_inverse_entry(Index u, Index v, Index delay_bins, Index doppler_bins) {
  if (delay_bins < 1 || doppler_bins < 1) throw ConfigError("otfs_inverse_entry: K, L must be >= 1");
  const Index n = delay_bins * doppler_bins;
  if (u < 0 || u >= n || v < 0 || v >= n) {
    throw IndexError("otfs_inverse_entry: index (" + std::to_string(u) + "," + std::to_string(v) +
                     ") outside [0," + std::to_string(n) + ")");
  }
  const Index mu = u / delay_bins;
  const Index r = u % delay_bins;
  if ((v - mu) % doppler_bins != 0) return {0.0, 0.0};
  const double magnitude = static_cast<double>(doppler_bins) /
                           std::sqrt(static_cast<double>(doppler_bins) * static_cast<double>(n));
  const double angle = 2.0 * kPi * static_cast<double>((v * r) % n) / static_cast<double>(n);
  return std::polar(magnitude, angle);
}

CVector afdm_inverse_column(Index n, double q) {
  if (n < 1) throw DimensionError("afdm_inverse_column: N must be >= 1");
  // Direct DFT of the conjugate chirp, scaled by 1/sqrt(N) as in the Gauss-sum form.
  const CVector chirp = chirp_diagonal(n, q).conjugate();
  CVector col(n);
  for (Index u = 0; u < n; ++u) {
    cplx acc(0.0, 0.0);
    for (Index k = 0; k < n; ++k) {
      const double angle = -2.0 * kPi * static_cast<double>((k * u) % n) / static_cast<double>(n);
      acc += chirp(k) * std::polar(1.0, angle);
    }
    col(u) = acc / std::sqrt(static_cast<double>(n));
  }
  return col;
}

}  // namespace mcw
