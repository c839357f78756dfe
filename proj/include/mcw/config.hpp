#pragma once

// JSON (de)serialization of the experiment building blocks. Every parse
// function throws ConfigError with the offending key on bad input.

#include <string>
#include <vector>

#include "json.hpp"
#include "mcw/channel.hpp"
#include "mcw/fdma.hpp"
#include "mcw/noise.hpp"
#include "mcw/sim.hpp"
#include "mcw/waveform.hpp"

namespace mcw::config {

using Json = nlohmann::json;

Json load_file(const std::string& path);

/// `n` is used when the entry does not carry its own size.
WaveformConfig parse_waveform(const Json& j, Index n);
Json to_json(const WaveformConfig& w);

std::vector<WaveformConfig> parse_waveforms(const Json& j, Index n);

/// Array of waveform entries placed back to back.
BlockLayout parse_layout(const Json& j);
Json to_json(const BlockLayout& layout);

NoiseSpec parse_noise(const Json& j);
Json to_json(const NoiseSpec& noise);

/// {"taps": 8, "max_doppler": 0.3} or {"fixed": [{"delay":0,"gain":[re,im],"doppler":0}]}.
ChannelSpec parse_channel(const Json& j);
Json to_json(const ChannelSpec& channel);

EqualizerKind parse_equalizer(const Json& j);

/// Fills the simulation fields shared by ber / sweep-l / sweep-q.
SimConfig parse_sim(const Json& j, const BlockLayout& layout);
Json to_json(const SimConfig& cfg);

template <typename T>
T get_or(const Json& j, const char* key, T fallback) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: bad value for '") + key + "': " + e.what());
  }
}

}  // namespace mcw::config
