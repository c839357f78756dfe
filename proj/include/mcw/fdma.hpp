#pragma once

// Multi-waveform FDMA: contiguous blocks of one size-N DFT grid, each
// precoded by its own waveform.

#include <optional>
#include <vector>

#include "mcw/noise.hpp"
#include "mcw/waveform.hpp"

namespace mcw {

/// Resource-block granularity used by the default layouts.
inline constexpr Index kResourceBlockBins = 12;

struct Block {
  WaveformConfig waveform;
  Index start = 0;

  Index width() const { return waveform.size; }
};

class BlockLayout {
 public:
  BlockLayout() = default;
  /// Validates contiguity and per-block constraints; throws ConfigError.
  explicit BlockLayout(std::vector<Block> blocks);
  /// Blocks placed back to back starting at bin 0.
  static BlockLayout contiguous(const std::vector<WaveformConfig>& waveforms);
  static BlockLayout single(const WaveformConfig& waveform);

  const std::vector<Block>& blocks() const { return blocks_; }
  Index size() const { return total_; }
  std::size_t block_count() const { return blocks_.size(); }

 private:
  std::vector<Block> blocks_;
  Index total_ = 0;
};

TimeSignal compose_fdma(const BlockLayout& layout, const std::vector<CVector>& data);

/// Size-N DFT, optional per-bin equalization, then each block's Q_i^-1.
std::vector<CVector> decompose_fdma(const TimeSignal& received, const BlockLayout& layout,
                                    const std::optional<CVector>& per_bin_equalizer = std::nullopt);

/// Same as decompose_fdma, starting from the frequency-domain vector.
std::vector<CVector> decompose_fdma_frequency(const CVector& received_f, const BlockLayout& layout);

/// Analytic demodulated noise variance per block, concatenated in layout order.
RVector fdma_noise_variance(const BlockLayout& layout, const NoiseProfile& profile, double sigma);

}  // namespace mcw
