#pragma once

// Doubly dispersive channel H = sum_l h_l Delta_{theta_l} Pi^{l} and the
// ZF / MMSE equalizers built from it.

#include <optional>
#include <vector>

#include "mcw/random.hpp"
#include "mcw/types.hpp"

namespace mcw {

struct ChannelTap {
  Index delay = 0;        // samples
  cplx gain{1.0, 0.0};
  double doppler = 0.0;   // normalized, cycles per block
};

/// Statistical description of a random channel: L_c taps on consecutive
/// delays with uniform power 1/L_c and Doppler uniform in [-max, max].
struct ChannelGenerator {
  Index tap_count = 8;
  double max_doppler = 0.0;
};

struct ChannelSpec {
  std::vector<ChannelTap> taps;
  std::optional<ChannelGenerator> generator;

  bool quasi_static() const;
  static ChannelSpec identity();
};

struct ChannelMatrix {
  CMatrix matrix;
  ChannelSpec spec;
};

enum class EqualizerKind { ZeroForcing, Mmse };

struct Equalizer {
  CMatrix time;        // G
  CMatrix frequency;   // G_f = F G F^H
  EqualizerKind kind = EqualizerKind::Mmse;
  double regularization = 0.0;
};

/// Condition number of H^H H above which zero forcing is refused.
inline constexpr double kMaxZfCondition = 1e12;

ChannelMatrix build_channel(const ChannelSpec& spec, Index n);
ChannelSpec realize_random_channel(const ChannelGenerator& gen, Rng& rng);

Equalizer zf_equalizer(const ChannelMatrix& channel);
Equalizer mmse_equalizer(const ChannelMatrix& channel, double rho);

CMatrix to_frequency(const CMatrix& m);
CMatrix from_frequency(const CMatrix& m_f);

/// H x without materializing H; O(N * taps).
CVector apply_channel(const ChannelSpec& spec, const CVector& x);

/// Diagonal of F H F^H for a zero-Doppler channel: sum_l h_l exp(-2j pi n l / N).
CVector frequency_response(const ChannelSpec& spec, Index n);

/// Per-bin MMSE weights conj(H_f) / (|H_f|^2 + rho); rho = 0 gives ZF.
CVector per_bin_mmse(const CVector& response, double rho);

}  // namespace mcw
