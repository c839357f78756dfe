#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "mcw/types.hpp"

namespace mcw {

using Bits = std::vector<std::uint8_t>;

/// Gray-mapped square QAM with unit average symbol energy. The first half
/// of each symbol's bits selects the in-phase level, the second half the
/// quadrature level.
class QamConstellation {
 public:
  explicit QamConstellation(int order);

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_per_symbol_; }
  /// All points, indexed by the integer formed from a symbol's bits (MSB first).
  const CVector& alphabet() const { return alphabet_; }

  CVector map(std::span<const std::uint8_t> bits) const;
  /// Minimum-distance hard decision, per symbol.
  Bits demap(const CVector& symbols) const;

 private:
  double level(int gray_bits) const;
  int decide(double x) const;

  int order_;
  int bits_per_symbol_;
  int levels_;          // sqrt(order)
  int axis_bits_;
  double scale_;
  std::vector<int> gray_to_index_;
  std::vector<int> index_to_gray_;
  CVector alphabet_;
};

}  // namespace mcw
