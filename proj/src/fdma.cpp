#include "mcw/fdma.hpp"

#include <string>

#include "mcw/fft.hpp"

namespace mcw {

BlockLayout::BlockLayout(std::vector<Block> blocks) : blocks_(std::move(blocks)) {
  if (blocks_.empty()) throw ConfigError("layout: at least one block is required");
  Index next = 0;
  for (const auto& b : blocks_) {
    b.waveform.validate();
    if (b.start != next) {
      throw ConfigError("layout: block at bin " + std::to_string(b.start) +
                        " is not contiguous with the previous block ending at " + std::to_string(next));
    }
    next += b.width();
  }
  total_ = next;
}

BlockLayout BlockLayout::contiguous(const std::vector<WaveformConfig>& waveforms) {
  std::vector<Block> blocks;
  Index start = 0;
  for (const auto& w : waveforms) {
    blocks.push_back(Block{w, start});
    start += w.size;
  }
  return BlockLayout(std::move(blocks));
}

BlockLayout BlockLayout::single(const WaveformConfig& waveform) { return contiguous({waveform}); }

TimeSignal compose_fdma(const BlockLayout& layout, const std::vector<CVector>& data) {
  if (data.size() != layout.block_count()) {
    throw DimensionError("compose_fdma: " + std::to_string(data.size()) + " data blocks for " +
                         std::to_string(layout.block_count()) + " layout blocks");
  }
  CVector z(layout.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Block& b = layout.blocks()[i];
    z.segment(b.start, b.width()) = Precoder(b.waveform).apply(data[i]);
  }
  return TimeSignal(unitary_ifft(z));
}

std::vector<CVector> decompose_fdma_frequency(const CVector& received_f, const BlockLayout& layout) {
  if (received_f.size() != layout.size()) {
    throw DimensionError("decompose_fdma: signal length " + std::to_string(received_f.size()) +
                         " does not match layout size " + std::to_string(layout.size()));
  }
  std::vector<CVector> out;
  out.reserve(layout.block_count());
  for (const auto& b : layout.blocks()) {
    out.push_back(Precoder(b.waveform).apply_inverse(received_f.segment(b.start, b.width())));
  }
  return out;
}

std::vector<CVector> decompose_fdma(const TimeSignal& received, const BlockLayout& layout,
                                    const std::optional<CVector>& per_bin_equalizer) {
  if (received.size() != layout.size()) {
    throw DimensionError("decompose_fdma: signal length " + std::to_string(received.size()) +
                         " does not match layout size " + std::to_string(layout.size()));
  }
  CVector rf = unitary_fft(received.values);
  if (per_bin_equalizer) {
    if (per_bin_equalizer->size() != rf.size()) throw DimensionError("decompose_fdma: equalizer length mismatch");
    rf = rf.cwiseProduct(*per_bin_equalizer);
  }
  return decompose_fdma_frequency(rf, layout);
}

RVector fdma_noise_variance(const BlockLayout& layout, const NoiseProfile& profile, double sigma) {
  if (profile.size() != layout.size()) throw DimensionError("fdma_noise_variance: profile length mismatch");
  RVector out(layout.size());
  for (const auto& b : layout.blocks()) {
    const CMatrix q_inv = build_precoder(b.waveform).inverse;
    const RVector g = profile.gains.segment(b.start, b.width());
    out.segment(b.start, b.width()) = sigma * sigma * (q_inv.cwiseAbs2() * g);
  }
  return out;
}

}  // namespace mcw
