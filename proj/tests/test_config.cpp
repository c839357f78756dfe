#include <sstream>

#include "doctest.h"
#include "mcw/config.hpp"
#include "mcw/report.hpp"

using namespace mcw;
using config::Json;

TEST_CASE("parse_waveform") {
  CHECK(config::parse_waveform(Json::parse(R"({"kind":"ofdm"})"), 64) == WaveformConfig::ofdm(64));
  CHECK(config::parse_waveform(Json::parse(R"({"kind":"otfs","doppler_bins":8})"), 64) == WaveformConfig::otfs(8, 8));
  CHECK(config::parse_waveform(Json::parse(R"({"kind":"otfs","delay_bins":12})"), 120) ==
        WaveformConfig::otfs(12, 10));
  CHECK(config::parse_waveform(Json::parse(R"({"kind":"afdm","q":-4,"alpha":0.1,"n":24})"), 64) ==
        WaveformConfig::afdm(24, -4, 0.1));

  CHECK_THROWS_AS(config::parse_waveform(Json::parse(R"({"kind":"fbmc"})"), 64), ConfigError);
  CHECK_THROWS_AS(config::parse_waveform(Json::parse(R"({"kind":"otfs"})"), 64), ConfigError);
  CHECK_THROWS_AS(config::parse_waveform(Json::parse(R"({"kind":"otfs","doppler_bins":7})"), 64), ConfigError);
  CHECK_THROWS_AS(config::parse_waveform(Json::parse(R"({"kind":"afdm","q":"x"})"), 64), ConfigError);
  CHECK_THROWS_AS(config::parse_waveform(Json::parse("3"), 64), ConfigError);
}

TEST_CASE("waveform and layout JSON roundtrip") {
  for (const auto& w : {WaveformConfig::ofdm(12), WaveformConfig::otfs(4, 3), WaveformConfig::afdm(24, 0.5, 0.1)}) {
    CHECK(config::parse_waveform(config::to_json(w), 0) == w);
  }
  const BlockLayout l = config::parse_layout(Json::parse(R"([{"kind":"ofdm"},{"kind":"afdm","q":-4,"alpha":0.1,"n":24}])"));
  CHECK(l.size() == 36);
  CHECK(l.blocks()[1].start == 12);
  const BlockLayout back = config::parse_layout(config::to_json(l));
  CHECK(back.size() == l.size());
  CHECK(back.blocks()[1].waveform == l.blocks()[1].waveform);
}

TEST_CASE("parse_noise") {
  CHECK(config::parse_noise(Json("impulse")).kind == NoiseKind::Impulse);
  const NoiseSpec n = config::parse_noise(Json::parse(R"({"kind":"interferer","width":4,"start":30,"taper":"flat"})"));
  CHECK(n.kind == NoiseKind::Interferer);
  CHECK(n.params.interferer.width == Index(4));
  CHECK(n.params.interferer.start == Index(30));
  CHECK(n.params.interferer.taper == InterfererTaper::Flat);
  const NoiseSpec e = config::parse_noise(Json::parse(R"({"kind":"equalized","taps":[1,[0.5,-0.5]]})"));
  REQUIRE(e.params.equalized.taps.size() == 2);
  CHECK(e.params.equalized.taps[1] == cplx(0.5, -0.5));
  CHECK_THROWS_AS(config::parse_noise(Json("pink")), ConfigError);
  CHECK_THROWS_AS(config::parse_noise(Json::parse(R"({"kind":"interferer","taper":"hann"})")), ConfigError);

  const NoiseSpec r = config::parse_noise(config::to_json(n));
  CHECK(r.kind == n.kind);
  CHECK(r.params.interferer.width == n.params.interferer.width);
}

TEST_CASE("parse_channel and parse_sim") {
  const ChannelSpec gen = config::parse_channel(Json::parse(R"({"taps":4,"max_doppler":0.3})"));
  REQUIRE(gen.generator);
  CHECK(gen.generator->tap_count == 4);
  CHECK(gen.generator->max_doppler == 0.3);
  const ChannelSpec fixed = config::parse_channel(Json::parse(R"({"fixed":[{"delay":0,"gain":[0.5,0.5]},{"delay":2}]})"));
  CHECK_FALSE(fixed.generator);
  REQUIRE(fixed.taps.size() == 2);
  CHECK(fixed.taps[0].gain == cplx(0.5, 0.5));
  CHECK(fixed.taps[1].delay == 2);

  const BlockLayout l = BlockLayout::single(WaveformConfig::ofdm(64));
  const SimConfig cfg = config::parse_sim(
      Json::parse(R"({"snr_db":[0,5],"bits_per_point":50000,"seed":9,"equalizer":"zf","qam":4,"noise":"impulse"})"), l);
  CHECK(cfg.snr_db == std::vector<double>{0.0, 5.0});
  CHECK(cfg.bits_per_point == 50000);
  CHECK(cfg.seed == 9);
  CHECK(cfg.equalizer == EqualizerKind::ZeroForcing);
  CHECK(cfg.qam_order == 4);
  CHECK(cfg.noise.kind == NoiseKind::Impulse);
  CHECK(describe(config::parse_sim(config::to_json(cfg), l)) == describe(cfg));

  CHECK_THROWS_AS(config::parse_sim(Json::parse(R"({"bits_per_point":-5})"), l), ConfigError);
  CHECK_THROWS_AS(config::parse_sim(Json::parse(R"({"bits_per_point":1.5})"), l), ConfigError);
  CHECK_THROWS_AS(config::parse_sim(Json::parse(R"({"snr_db":"high"})"), l), ConfigError);
  CHECK_THROWS_AS(config::parse_sim(Json::parse(R"({"equalizer":"ml"})"), l), ConfigError);
  CHECK_THROWS_AS(config::load_file("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("report formatting") {
  CHECK(report::format_double(0.1) == "0.10000000000000001");
  CHECK(report::format_double(3.0) == "3");
  CHECK(report::slug("OTFS(K=8,L=8)") == "otfs_k8_l8");
  CHECK(report::slug("AFDM(q=-4,alpha=0.1)") == "afdm_qm4_alpha0p1");
  CHECK(report::slug("OFDM") == "ofdm");

  RVector v(3);
  v << 0.1, 1.0 / 3.0, 2.5e-17;
  std::stringstream ss;
  report::write_variance_csv(ss, v);
  CHECK(ss.str().rfind("subcarrier,variance\n", 0) == 0);
  const RVector back = report::read_variance_csv(ss);
  CHECK(back == v);

  BerCurve c;
  c.points.push_back({10.0, 3, 1000, 0});
  std::stringstream ber;
  report::write_ber_csv(ber, c);
  CHECK(ber.str().rfind("snr_db,bits,errors,ber,stderr\n10,1000,3,0.0030000000000000001,", 0) == 0);

  std::stringstream cx;
  CVector z(1);
  z << cplx(1.0, -2.0);
  report::write_complex_csv(cx, z);
  CHECK(cx.str() == "index,re,im\n0,1,-2\n");
}
