#include "mcw/config.hpp"

#include <fstream>

#include "mcw/errors.hpp"

namespace mcw::config {

Json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  try {
    return Json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config: '" + path + "' is not valid JSON: " + e.what());
  }
}

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError(std::string("config: missing '") + key + "'");
  return j.at(key);
}

template <typename T>
T get(const Json& j, const char* key) {
  try {
    return require(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

cplx parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ConfigError("config: complex values are numbers or [re, im] pairs");
}

std::optional<Index> optional_index(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<Index>(j, key);
}

}  // namespace

WaveformConfig parse_waveform(const Json& j, Index n) {
  if (!j.is_object()) throw ConfigError("config: waveform entries must be objects");
  const WaveformKind kind = waveform_kind_from_string(get<std::string>(j, "kind"));
  const Index size = get_or<Index>(j, "n", n);
  switch (kind) {
    case WaveformKind::Ofdm:
      return WaveformConfig::ofdm(size);
    case WaveformKind::Otfs: {
      if (j.contains("delay_bins") && j.contains("doppler_bins")) {
        const auto w = WaveformConfig::otfs(get<Index>(j, "delay_bins"), get<Index>(j, "doppler_bins"));
        if (j.contains("n") && w.size != size) throw ConfigError("config: OTFS K*L must equal n");
        return w;
      }
      if (j.contains("doppler_bins")) return WaveformConfig::otfs_with_doppler(size, get<Index>(j, "doppler_bins"));
      if (j.contains("delay_bins")) {
        const Index k = get<Index>(j, "delay_bins");
        if (k < 1 || size % k != 0) throw ConfigError("config: OTFS K must divide n");
        return WaveformConfig::otfs(k, size / k);
      }
      throw ConfigError("config: OTFS needs 'doppler_bins' or 'delay_bins'");
    }
    case WaveformKind::Afdm:
      return WaveformConfig::afdm(size, get_or<double>(j, "q", 0.0), get_or<double>(j, "alpha", 0.0));
  }
  throw ConfigError("config: unreachable waveform kind");
}

Json to_json(const WaveformConfig& w) {
  Json j{{"kind", to_string(w.kind)}, {"n", w.size}};
  if (w.kind == WaveformKind::Otfs) {
    j["delay_bins"] = w.delay_bins;
    j["doppler_bins"] = w.doppler_bins;
  } else if (w.kind == WaveformKind::Afdm) {
    j["q"] = w.chirp_q;
    j["alpha"] = w.chirp_alpha;
  }
  return j;
}

std::vector<WaveformConfig> parse_waveforms(const Json& j, Index n) {
  if (!j.is_array() || j.empty()) throw ConfigError("config: 'waveforms' must be a non-empty array");
  std::vector<WaveformConfig> out;
  for (const auto& e : j) out.push_back(parse_waveform(e, n));
  return out;
}

BlockLayout parse_layout(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("config: 'layout' must be a non-empty array");
  std::vector<WaveformConfig> w;
  for (const auto& e : j) w.push_back(parse_waveform(e, get_or<Index>(e, "n", kResourceBlockBins)));
  return BlockLayout::contiguous(w);
}

Json to_json(const BlockLayout& layout) {
  Json arr = Json::array();
  for (const auto& b : layout.blocks()) {
    Json e = to_json(b.waveform);
    e["start"] = b.start;
    arr.push_back(e);
  }
  return arr;
}

NoiseSpec parse_noise(const Json& j) {
  NoiseSpec spec;
  if (j.is_string()) {
    spec.kind = noise_kind_from_string(j.get<std::string>());
    return spec;
  }
  if (!j.is_object()) throw ConfigError("config: noise must be a name or an object");
  spec.kind = noise_kind_from_string(get<std::string>(j, "kind"));
  auto& imp = spec.params.impulse;
  imp.count = optional_index(j, "count");
  imp.offset = get_or<Index>(j, "offset", imp.offset);
  auto& itf = spec.params.interferer;
  itf.width = optional_index(j, "width");
  itf.start = optional_index(j, "start");
  const std::string taper = get_or<std::string>(j, "taper", "bell");
  if (taper == "bell") {
    itf.taper = InterfererTaper::Bell;
  } else if (taper == "flat") {
    itf.taper = InterfererTaper::Flat;
  } else {
    throw ConfigError("config: taper must be 'bell' or 'flat'");
  }
  const double fraction = get_or<double>(j, "power_fraction", 0.9);
  imp.power_fraction = fraction;
  itf.power_fraction = fraction;
  auto& eq = spec.params.equalized;
  eq.tap_count = get_or<Index>(j, "tap_count", eq.tap_count);
  eq.seed = get_or<std::uint64_t>(j, "seed", eq.seed);
  eq.cap = get_or<double>(j, "cap", eq.cap);
  if (j.contains("taps")) {
    if (!j.at("taps").is_array()) throw ConfigError("config: equalized 'taps' must be an array");
    for (const auto& t : j.at("taps")) eq.taps.push_back(parse_complex(t));
  }
  return spec;
}

Json to_json(const NoiseSpec& noise) {
  Json j{{"kind", to_string(noise.kind)}};
  const auto& p = noise.params;
  switch (noise.kind) {
    case NoiseKind::White:
      break;
    case NoiseKind::Impulse:
      if (p.impulse.count) j["count"] = *p.impulse.count;
      j["offset"] = p.impulse.offset;
      j["power_fraction"] = p.impulse.power_fraction;
      break;
    case NoiseKind::Interferer:
      if (p.interferer.width) j["width"] = *p.interferer.width;
      if (p.interferer.start) j["start"] = *p.interferer.start;
      j["power_fraction"] = p.interferer.power_fraction;
      j["taper"] = p.interferer.taper == InterfererTaper::Bell ? "bell" : "flat";
      break;
    case NoiseKind::Equalized: {
      j["tap_count"] = p.equalized.tap_count;
      j["seed"] = p.equalized.seed;
      j["cap"] = p.equalized.cap;
      if (!p.equalized.taps.empty()) {
        Json taps = Json::array();
        for (const auto& t : p.equalized.taps) taps.push_back({t.real(), t.imag()});
        j["taps"] = taps;
      }
      break;
    }
  }
  return j;
}

ChannelSpec parse_channel(const Json& j) {
  if (!j.is_object()) throw ConfigError("config: channel must be an object");
  if (j.contains("fixed")) {
    ChannelSpec spec;
    const Json& taps = j.at("fixed");
    if (!taps.is_array() || taps.empty()) throw ConfigError("config: 'fixed' must be a non-empty tap array");
    for (const auto& t : taps) {
      ChannelTap tap;
      tap.delay = get<Index>(t, "delay");
      tap.gain = t.contains("gain") ? parse_complex(t.at("gain")) : cplx(1.0, 0.0);
      tap.doppler = get_or<double>(t, "doppler", 0.0);
      spec.taps.push_back(tap);
    }
    return spec;
  }
  return random_channel(get_or<Index>(j, "taps", 8), get_or<double>(j, "max_doppler", 0.0));
}

Json to_json(const ChannelSpec& channel) {
  if (channel.generator) {
    return Json{{"taps", channel.generator->tap_count}, {"max_doppler", channel.generator->max_doppler}};
  }
  Json taps = Json::array();
  for (const auto& t : channel.taps) {
    taps.push_back({{"delay", t.delay}, {"gain", {t.gain.real(), t.gain.imag()}}, {"doppler", t.doppler}});
  }
  return Json{{"fixed", taps}};
}

EqualizerKind parse_equalizer(const Json& j) {
  const std::string name = j.get<std::string>();
  if (name == "mmse") return EqualizerKind::Mmse;
  if (name == "zf") return EqualizerKind::ZeroForcing;
  throw ConfigError("config: equalizer must be 'mmse' or 'zf'");
}

SimConfig parse_sim(const Json& j, const BlockLayout& layout) {
  SimConfig cfg;
  cfg.layout = layout;
  cfg.channel = j.contains("channel") ? parse_channel(j.at("channel")) : random_channel();
  if (j.contains("noise")) cfg.noise = parse_noise(j.at("noise"));
  cfg.qam_order = get_or<int>(j, "qam", 16);
  if (j.contains("snr_db")) {
    const Json& s = j.at("snr_db");
    if (s.is_number()) {
      cfg.snr_db = {s.get<double>()};
    } else if (s.is_array()) {
      for (const auto& v : s) {
        if (!v.is_number()) throw ConfigError("config: 'snr_db' entries must be numbers");
        cfg.snr_db.push_back(v.get<double>());
      }
    } else {
      throw ConfigError("config: 'snr_db' must be a number or an array");
    }
  }
  if (j.contains("bits_per_point")) {
    const Json& b = j.at("bits_per_point");
    if (!b.is_number_integer() || b.get<std::int64_t>() < 0) {
      throw ConfigError("config: 'bits_per_point' must be a non-negative integer");
    }
    cfg.bits_per_point = b.get<std::uint64_t>();
  }
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.threads = get_or<unsigned>(j, "threads", cfg.threads);
  if (j.contains("equalizer")) cfg.equalizer = parse_equalizer(j.at("equalizer"));
  cfg.subcarrier_spacing_hz = get_or<double>(j, "subcarrier_spacing_hz", cfg.subcarrier_spacing_hz);
  return cfg;
}

Json to_json(const SimConfig& cfg) {
  return Json{{"layout", to_json(cfg.layout)},
              {"channel", to_json(cfg.channel)},
              {"noise", to_json(cfg.noise)},
              {"qam", cfg.qam_order},
              {"snr_db", cfg.snr_db},
              {"bits_per_point", cfg.bits_per_point},
              {"seed", cfg.seed},
              {"equalizer", cfg.equalizer == EqualizerKind::Mmse ? "mmse" : "zf"},
              {"subcarrier_spacing_hz", cfg.subcarrier_spacing_hz}};
}

}  // namespace mcw::config
