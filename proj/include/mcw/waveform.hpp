#pragma once

// OFDM, OTFS and AFDM expressed as precoded OFDM: x = F^H Q c.

#include <string>

#include "mcw/errors.hpp"
#include "mcw/types.hpp"

namespace mcw {

enum class WaveformKind { Ofdm, Otfs, Afdm };

std::string to_string(WaveformKind kind);
WaveformKind waveform_kind_from_string(const std::string& name);

struct WaveformConfig {
  WaveformKind kind = WaveformKind::Ofdm;
  Index size = 0;           // N
  Index delay_bins = 0;     // K (OTFS)
  Index doppler_bins = 0;   // L (OTFS), K * L = N
  double chirp_q = 0.0;     // AFDM
  double chirp_alpha = 0.0; // AFDM

  static WaveformConfig ofdm(Index n);
  static WaveformConfig otfs(Index delay_bins, Index doppler_bins);
  /// OTFS on N subcarriers with L Doppler bins; K = N / L.
  static WaveformConfig otfs_with_doppler(Index n, Index doppler_bins);
  static WaveformConfig afdm(Index n, double q, double alpha);

  /// Throws ConfigError when the invariants do not hold.
  void validate() const;
  /// Short human-readable label, e.g. "OTFS(L=10)".
  std::string label() const;

  friend bool operator==(const WaveformConfig&, const WaveformConfig&) = default;
};

enum class Domain { Data, Time, Frequency };

/// A length-N vector tagged with the domain it lives in.
template <Domain D>
struct Signal {
  CVector values;

  Signal() = default;
  explicit Signal(CVector v) : values(std::move(v)) {}
  Index size() const { return values.size(); }
};

using DataSignal = Signal<Domain::Data>;
using TimeSignal = Signal<Domain::Time>;
using FrequencySignal = Signal<Domain::Frequency>;

/// Dense precoder Q and its inverse, materialized for N <= kMaxDenseSize.
struct PrecoderMatrix {
  CMatrix forward;
  CMatrix inverse;
  WaveformConfig config;
};

inline constexpr Index kMaxDenseSize = 4096;

PrecoderMatrix build_precoder(const WaveformConfig& cfg);

/// Operator form of Q and Q^-1: diagonal multiplies, FFTs and grid
/// transforms, O(N log N) per application. Agrees with PrecoderMatrix.
class Precoder {
 public:
  explicit Precoder(const WaveformConfig& cfg);

  const WaveformConfig& config() const { return cfg_; }
  Index size() const { return cfg_.size; }

  /// z = Q c
  CVector apply(const CVector& data) const;
  /// c = Q^-1 z
  CVector apply_inverse(const CVector& precoded) const;
  /// x = F^H Q c, computed without the intermediate frequency vector
  /// where the waveform allows it.
  CVector to_time(const CVector& data) const;

 private:
  WaveformConfig cfg_;
  CVector chirp_q_;
  CVector chirp_alpha_;
};

TimeSignal modulate(const WaveformConfig& cfg, const DataSignal& data);
DataSignal demodulate(const WaveformConfig& cfg, const FrequencySignal& received);

/// Closed form of the OTFS demodulator entry (Q^-1)_{u,v}.
cplx otfs_inverse_entry(Index u, Index v, Index delay_bins, Index doppler_bins);

/// Gauss-sum column: entry u = (1/sqrt N) * sum_k exp(-j pi q k^2 / N) exp(-2j pi k u / N).
/// The first column of the circulant factor F Lambda_q^H F^H is this vector
/// divided by sqrt(N).
CVector afdm_inverse_column(Index n, double q);

}  // namespace mcw
