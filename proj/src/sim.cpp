#include "mcw/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "mcw/errors.hpp"
#include "mcw/fft.hpp"

namespace mcw {

double BerPoint::std_error() const {
  if (bits == 0) return 0.0;
  const double p = ber();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

ChannelSpec random_channel(Index taps, double max_doppler) {
  ChannelSpec spec;
  spec.generator = ChannelGenerator{taps, max_doppler};
  return spec;
}

void SimConfig::validate() const {
  if (layout.block_count() == 0) throw ConfigError("sim: layout is empty");
  QamConstellation{qam_order};
  if (snr_db.empty()) throw ConfigError("sim: SNR grid is empty");
  for (double s : snr_db) {
    if (!std::isfinite(s)) throw ConfigError("sim: SNR values must be finite");
  }
  if (bits_per_point < kMinBitsPerPoint) {
    throw ConfigError("sim: bit budget must be >= " + std::to_string(kMinBitsPerPoint) + ", got " +
                      std::to_string(bits_per_point));
  }
  if (threads < 1) throw ConfigError("sim: thread count must be >= 1");
  if (channel.generator) {
    if (channel.generator->tap_count < 1 || channel.generator->tap_count > layout.size()) {
      throw ConfigError("sim: channel tap count must lie in [1, N]");
    }
    if (!(channel.generator->max_doppler >= 0.0)) throw ConfigError("sim: max Doppler must be >= 0");
  } else {
    if (channel.taps.empty()) throw ConfigError("sim: channel needs taps or a generator");
    for (const auto& t : channel.taps) {
      if (t.delay < 0 || t.delay >= layout.size()) throw ConfigError("sim: tap delay outside [0, N)");
    }
  }
  const bool doppler = channel.generator ? channel.generator->max_doppler > 0.0 : !channel.quasi_static();
  if (doppler && layout.block_count() > 1) {
    throw ConfigError("sim: multi-block layouts require a quasi-static channel");
  }
  make_profile(noise.kind, layout.size(), noise.params);
}

LinkSimulator::LinkSimulator(const SimConfig& cfg) : cfg_(cfg), qam_(cfg.qam_order) {
  cfg_.validate();
  for (const auto& b : cfg_.layout.blocks()) precoders_.emplace_back(b.waveform);
  profile_ = make_profile(cfg_.noise.kind, cfg_.layout.size(), cfg_.noise.params);
}

std::uint64_t LinkSimulator::min_block_bits() const {
  Index w = cfg_.layout.size();
  for (const auto& b : cfg_.layout.blocks()) w = std::min(w, b.width());
  return static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(qam_.bits_per_symbol());
}

std::uint64_t LinkSimulator::frames_per_point() const {
  const std::uint64_t per = min_block_bits();
  return (cfg_.bits_per_point + per - 1) / per;
}

FrameResult LinkSimulator::frame(double snr_db, Rng& rng) const {
  const Index n = cfg_.layout.size();
  const auto& blocks = cfg_.layout.blocks();
  FrameResult out;

  const ChannelSpec channel =
      cfg_.channel.generator ? realize_random_channel(*cfg_.channel.generator, rng) : cfg_.channel;

  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<CVector> symbols;
  for (const auto& b : blocks) {
    Bits bits(static_cast<std::size_t>(b.width() * qam_.bits_per_symbol()));
    for (auto& bit : bits) bit = static_cast<std::uint8_t>(coin(rng));
    symbols.push_back(qam_.map(bits));
    out.tx.push_back(std::move(bits));
  }

  // E_s = 1, so sigma_w^2 = 10^(-SNR/10).
  const double noise_var = std::pow(10.0, -snr_db / 10.0);
  const double sigma = std::sqrt(noise_var);
  const NoiseSample noise = sample_noise(profile_, sigma, rng);

  CVector z(n);
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    z.segment(blocks[i].start, blocks[i].width()) = precoders_[i].apply(symbols[i]);
  }
  const CVector y = apply_channel(channel, unitary_ifft(z)) + unitary_ifft(noise.values);

  const double rho = noise_var * profile_.trace() / static_cast<double>(n);
  CVector rf;
  if (channel.quasi_static()) {
    const CVector hf = frequency_response(channel, n);
    if (cfg_.equalizer == EqualizerKind::ZeroForcing) {
      const double hi = hf.cwiseAbs2().maxCoeff();
      const double lo = hf.cwiseAbs2().minCoeff();
      if (!(lo > 0.0) || hi / lo > kMaxZfCondition) {
        out.skipped = true;
        return out;
      }
    }
    const double reg = cfg_.equalizer == EqualizerKind::Mmse ? rho : 0.0;
    rf = per_bin_mmse(hf, reg).cwiseProduct(unitary_fft(y));
  } else {
    const ChannelMatrix h = build_channel(channel, n);
    CVector x_hat;
    if (cfg_.equalizer == EqualizerKind::Mmse && rho > 0.0) {
      const CMatrix gram = h.matrix.adjoint() * h.matrix + rho * CMatrix::Identity(n, n);
      x_hat = gram.llt().solve(h.matrix.adjoint() * y);
    } else {
      try {
        x_hat = zf_equalizer(h).time * y;
      } catch (const EqualizationError&) {
        out.skipped = true;
        return out;
      }
    }
    rf = unitary_fft(x_hat);
  }

  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const CVector c_hat = precoders_[i].apply_inverse(rf.segment(blocks[i].start, blocks[i].width()));
    out.rx.push_back(qam_.demap(c_hat));
  }
  return out;
}

FrameResult run_frame(const SimConfig& cfg, double snr_db, Rng& rng) {
  return LinkSimulator(cfg).frame(snr_db, rng);
}

namespace {

struct Tally {
  std::vector<std::uint64_t> errors;
  std::vector<std::uint64_t> bits;
  std::uint64_t skipped = 0;
};

Tally simulate_point(const LinkSimulator& link, double snr_db, std::uint64_t frames, unsigned threads) {
  const std::size_t nblocks = link.config().layout.block_count();
  std::vector<Tally> partial(threads, Tally{std::vector<std::uint64_t>(nblocks, 0),
                                            std::vector<std::uint64_t>(nblocks, 0), 0});
  auto worker = [&](unsigned t) {
    Tally& acc = partial[t];
    for (std::uint64_t f = t; f < frames; f += threads) {
      Rng rng = make_stream(link.config().seed, f);
      const FrameResult r = link.frame(snr_db, rng);
      if (r.skipped) {
        ++acc.skipped;
        continue;
      }
      for (std::size_t i = 0; i < nblocks; ++i) {
        std::uint64_t e = 0;
        for (std::size_t k = 0; k < r.tx[i].size(); ++k) e += r.tx[i][k] != r.rx[i][k];
        acc.errors[i] += e;
        acc.bits[i] += r.tx[i].size();
      }
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  Tally total{std::vector<std::uint64_t>(nblocks, 0), std::vector<std::uint64_t>(nblocks, 0), 0};
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < nblocks; ++i) {
      total.errors[i] += p.errors[i];
      total.bits[i] += p.bits[i];
    }
    total.skipped += p.skipped;
  }
  return total;
}

}  // namespace

std::vector<BerCurve> run_ber(const SimConfig& cfg) {
  const LinkSimulator link(cfg);
  const std::string hash = config_hash(describe(cfg));
  std::vector<BerCurve> curves;
  for (const auto& b : cfg.layout.blocks()) {
    BerCurve c;
    c.label = b.waveform.label();
    c.config_hash = hash;
    c.seed = cfg.seed;
    curves.push_back(std::move(c));
  }
  const std::uint64_t frames = link.frames_per_point();
  for (double snr : cfg.snr_db) {
    const Tally t = simulate_point(link, snr, frames, cfg.threads);
    for (std::size_t i = 0; i < curves.size(); ++i) {
      curves[i].points.push_back(BerPoint{snr, t.errors[i], t.bits[i], t.skipped});
    }
  }
  return curves;
}

namespace {

std::vector<SweepPoint> sweep(const SimConfig& tmpl, const std::vector<WaveformConfig>& waveforms,
                              const std::vector<double>& params) {
  if (tmpl.snr_db.empty()) throw ConfigError("sweep: template needs an SNR value");
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < waveforms.size(); ++i) {
    SimConfig cfg = tmpl;
    cfg.layout = BlockLayout::single(waveforms[i]);
    cfg.snr_db = {tmpl.snr_db.front()};
    const auto curves = run_ber(cfg);
    out.push_back(SweepPoint{params[i], waveforms[i].label(), curves.front().points.front()});
  }
  return out;
}

}  // namespace

std::vector<SweepPoint> sweep_L(const SimConfig& tmpl, const std::vector<Index>& doppler_bins) {
  const Index n = tmpl.layout.size();
  std::vector<WaveformConfig> w;
  std::vector<double> p;
  for (Index l : doppler_bins) {
    w.push_back(WaveformConfig::otfs_with_doppler(n, l));
    p.push_back(static_cast<double>(l));
  }
  return sweep(tmpl, w, p);
}

std::vector<SweepPoint> sweep_q(const SimConfig& tmpl, const std::vector<double>& q_values, double alpha) {
  const Index n = tmpl.layout.size();
  std::vector<WaveformConfig> w;
  for (double q : q_values) {
    if (q == 0.0) throw ConfigError("sweep_q: q values must be nonzero");
    w.push_back(WaveformConfig::afdm(n, q, alpha));
  }
  return sweep(tmpl, w, q_values);
}

std::string describe(const SimConfig& cfg) {
  std::ostringstream os;
  os.precision(17);
  os << "layout";
  for (const auto& b : cfg.layout.blocks()) {
    os << ' ' << to_string(b.waveform.kind) << ':' << b.start << ':' << b.waveform.size << ':'
       << b.waveform.delay_bins << ':' << b.waveform.doppler_bins << ':' << b.waveform.chirp_q << ':'
       << b.waveform.chirp_alpha;
  }
  os << "\nchannel";
  if (cfg.channel.generator) {
    os << " random " << cfg.channel.generator->tap_count << ' ' << cfg.channel.generator->max_doppler;
  } else {
    for (const auto& t : cfg.channel.taps) {
      os << ' ' << t.delay << ':' << t.gain.real() << ':' << t.gain.imag() << ':' << t.doppler;
    }
  }
  const auto& np = cfg.noise.params;
  os << "\nnoise " << to_string(cfg.noise.kind) << " impulse " << np.impulse.count.value_or(-1) << ':'
     << np.impulse.offset << ':' << np.impulse.power_fraction << " interferer "
     << np.interferer.width.value_or(-1) << ':' << np.interferer.start.value_or(-1) << ':'
     << np.interferer.power_fraction << ':' << static_cast<int>(np.interferer.taper) << " equalized "
     << np.equalized.tap_count << ':' << np.equalized.seed << ':' << np.equalized.cap;
  for (const auto& t : np.equalized.taps) os << ':' << t.real() << ',' << t.imag();
  os << "\nqam " << cfg.qam_order << "\nsnr";
  for (double s : cfg.snr_db) os << ' ' << s;
  os << "\nbits " << cfg.bits_per_point << "\nseed " << cfg.seed << "\nequalizer "
     << (cfg.equalizer == EqualizerKind::Mmse ? "mmse" : "zf") << '\n';
  // threads deliberately excluded: results do not depend on them.
  return os.str();
}

std::string config_hash(const std::string& canonical) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : canonical) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace mcw
