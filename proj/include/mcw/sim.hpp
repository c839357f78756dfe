#pragma once

// Seeded Monte-Carlo BER engine over a (possibly multi-waveform) block layout.

#include <cstdint>
#include <string>
#include <vector>

#include "mcw/channel.hpp"
#include "mcw/fdma.hpp"
#include "mcw/noise.hpp"
#include "mcw/qam.hpp"

namespace mcw {

struct NoiseSpec {
  NoiseKind kind = NoiseKind::White;
  ProfileParams params;
};

struct SimConfig {
  BlockLayout layout;
  // Fixed taps, or redrawn every frame from spec.generator when set.
  ChannelSpec channel;
  NoiseSpec noise;
  int qam_order = 16;
  std::vector<double> snr_db;
  // Minimum number of bits simulated per block and SNR point.
  std::uint64_t bits_per_point = 200000;
  std::uint64_t seed = 1;
  EqualizerKind equalizer = EqualizerKind::Mmse;
  unsigned threads = 1;
  double subcarrier_spacing_hz = 30e3;  // documentation only

  void validate() const;
};

inline constexpr std::uint64_t kMinBitsPerPoint = 10000;

/// Default channel: 8 consecutive taps, uniform power, no Doppler.
ChannelSpec random_channel(Index taps = 8, double max_doppler = 0.0);

struct BerPoint {
  double snr_db = 0.0;
  std::uint64_t errors = 0;
  std::uint64_t bits = 0;
  std::uint64_t skipped_frames = 0;

  double ber() const { return bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0; }
  /// Binomial standard error of ber().
  double std_error() const;
};

struct BerCurve {
  std::string label;
  std::vector<BerPoint> points;
  std::string config_hash;
  std::uint64_t seed = 0;
};

struct FrameResult {
  std::vector<Bits> tx;   // per block
  std::vector<Bits> rx;
  bool skipped = false;   // equalizer refused the channel
};

/// Read-only per-run state shared by all worker threads.
class LinkSimulator {
 public:
  explicit LinkSimulator(const SimConfig& cfg);

  const SimConfig& config() const { return cfg_; }
  /// Bits carried per frame by the narrowest block.
  std::uint64_t min_block_bits() const;
  std::uint64_t frames_per_point() const;

  /// Draws channel, data bits and noise from rng in that order.
  FrameResult frame(double snr_db, Rng& rng) const;

 private:
  SimConfig cfg_;
  std::vector<Precoder> precoders_;
  NoiseProfile profile_;
  QamConstellation qam_;
};

FrameResult run_frame(const SimConfig& cfg, double snr_db, Rng& rng);

/// One curve per layout block. Frame f of every SNR point draws from stream
/// (seed, f); results do not depend on the thread count.
std::vector<BerCurve> run_ber(const SimConfig& cfg);

struct SweepPoint {
  double parameter = 0.0;
  std::string label;
  BerPoint point;
};

/// OTFS BER versus L at the first SNR of the template, N = template size.
std::vector<SweepPoint> sweep_L(const SimConfig& tmpl, const std::vector<Index>& doppler_bins);
/// AFDM BER versus q at the first SNR of the template.
std::vector<SweepPoint> sweep_q(const SimConfig& tmpl, const std::vector<double>& q_values, double alpha);

/// Stable textual form of a configuration and its FNV-1a hash.
std::string describe(const SimConfig& cfg);
std::string config_hash(const std::string& canonical);

}  // namespace mcw
