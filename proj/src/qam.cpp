#include "mcw/qam.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mcw/errors.hpp"

namespace mcw {

QamConstellation::QamConstellation(int order) : order_(order) {
  if (order != 4 && order != 16 && order != 64) {
    throw ConfigError("QAM order must be 4, 16 or 64, got " + std::to_string(order));
  }
  bits_per_symbol_ = static_cast<int>(std::lround(std::log2(order)));
  axis_bits_ = bits_per_symbol_ / 2;
  levels_ = 1 << axis_bits_;
  // Mean of (2i - m + 1)^2 over both axes is 2(M - 1)/3.
  scale_ = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
  gray_to_index_.resize(static_cast<std::size_t>(levels_));
  index_to_gray_.resize(static_cast<std::size_t>(levels_));
  for (int i = 0; i < levels_; ++i) {
    const int g = i ^ (i >> 1);
    index_to_gray_[static_cast<std::size_t>(i)] = g;
    gray_to_index_[static_cast<std::size_t>(g)] = i;
  }
  alphabet_.resize(order);
  for (int s = 0; s < order; ++s) {
    alphabet_(s) = cplx(level(s >> axis_bits_), level(s & (levels_ - 1)));
  }
}

double QamConstellation::level(int gray_bits) const {
  const int i = gray_to_index_[static_cast<std::size_t>(gray_bits)];
  return scale_ * static_cast<double>(2 * i - levels_ + 1);
}

int QamConstellation::decide(double x) const {
  const double pos = (x / scale_ + static_cast<double>(levels_ - 1)) / 2.0;
  const long i = std::clamp<long>(std::lround(pos), 0, levels_ - 1);
  return index_to_gray_[static_cast<std::size_t>(i)];
}

CVector QamConstellation::map(std::span<const std::uint8_t> bits) const {
  if (bits.size() % static_cast<std::size_t>(bits_per_symbol_) != 0) {
    throw DimensionError("qam_map: " + std::to_string(bits.size()) + " bits is not a multiple of " +
                         std::to_string(bits_per_symbol_));
  }
  const auto count = static_cast<Index>(bits.size() / static_cast<std::size_t>(bits_per_symbol_));
  CVector out(count);
  std::size_t p = 0;
  for (Index s = 0; s < count; ++s) {
    int word = 0;
    for (int b = 0; b < bits_per_symbol_; ++b) word = (word << 1) | (bits[p++] & 1);
    out(s) = alphabet_(word);
  }
  return out;
}

Bits QamConstellation::demap(const CVector& symbols) const {
  Bits out;
  out.reserve(static_cast<std::size_t>(symbols.size() * bits_per_symbol_));
  for (Index s = 0; s < symbols.size(); ++s) {
    const int word = (decide(symbols(s).real()) << axis_bits_) | decide(symbols(s).imag());
    for (int b = bits_per_symbol_ - 1; b >= 0; --b) out.push_back(static_cast<std::uint8_t>((word >> b) & 1));
  }
  return out;
}

}  // namespace mcw
