#include <algorithm>

#include "doctest.h"
#include "mcw/noise.hpp"
#include "mcw/waveform.hpp"
#include "oracles.hpp"

using namespace mcw;

namespace {

double median(RVector v) {
  std::sort(v.data(), v.data() + v.size());
  const Index n = v.size();
  return n % 2 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

CMatrix q_inv(const WaveformConfig& cfg) { return build_precoder(cfg).inverse; }

}  // namespace

TEST_CASE("make_profile: white and equalized with a flat channel") {
  const NoiseProfile white = make_profile(NoiseKind::White, 8);
  CHECK(white.gains == RVector::Ones(8));

  ProfileParams p;
  p.equalized.taps = {cplx(1.0, 0.0)};
  const NoiseProfile flat = make_profile(NoiseKind::Equalized, 16, p);
  CHECK((flat.gains - RVector::Ones(16)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("make_profile: impulse defaults") {
  const NoiseProfile imp = make_profile(NoiseKind::Impulse, 64);
  CHECK(std::abs(imp.trace() - 64.0) < 1e-9);
  const double med = median(imp.gains);
  CHECK((imp.gains.array() > 10.0 * med).count() == 2);
  // direct construction: two bins at 0 and 32 carry 90% of the power
  CHECK(std::abs(imp.gains(0) - 0.9 * 64 / 2) < 1e-9);
  CHECK(std::abs(imp.gains(32) - 0.9 * 64 / 2) < 1e-9);
  CHECK(std::abs(imp.gains(1) - 0.1 * 64 / 62) < 1e-12);
}

TEST_CASE("make_profile: interferer and equalized are trace-normalized") {
  for (auto kind : {NoiseKind::Interferer, NoiseKind::Equalized, NoiseKind::Impulse}) {
    for (Index n : {12, 64, 120}) {
      const NoiseProfile p = make_profile(kind, n);
      CHECK(std::abs(p.trace() - double(n)) < 1e-9);
      CHECK((p.gains.array() >= 0.0).all());
    }
  }
  ProfileParams flat;
  flat.interferer.taper = InterfererTaper::Flat;
  flat.interferer.width = 8;
  flat.interferer.start = 10;
  const NoiseProfile itf = make_profile(NoiseKind::Interferer, 64, flat);
  CHECK(std::abs(itf.gains(10) - 0.9 * 64 / 8) < 1e-9);
  CHECK(std::abs(itf.gains(17) - 0.9 * 64 / 8) < 1e-9);
  CHECK(std::abs(itf.gains(18) - 0.1 * 64 / 56) < 1e-12);

  const NoiseProfile bell = make_profile(NoiseKind::Interferer, 64);
  CHECK(bell.gains(16 + 3) > bell.gains(16));
  CHECK(std::abs(bell.gains.segment(16, 8).sum() - 0.9 * 64) < 1e-9);
}

TEST_CASE("make_profile: parameter errors") {
  ProfileParams p;
  p.interferer.width = 65;
  CHECK_THROWS_AS(make_profile(NoiseKind::Interferer, 64, p), ParameterError);
  p = {};
  p.impulse.count = 65;
  CHECK_THROWS_AS(make_profile(NoiseKind::Impulse, 64, p), ParameterError);
  p = {};
  p.impulse.power_fraction = 1.5;
  CHECK_THROWS_AS(make_profile(NoiseKind::Impulse, 64, p), ParameterError);
  p = {};
  p.interferer.power_fraction = -0.1;
  CHECK_THROWS_AS(make_profile(NoiseKind::Interferer, 64, p), ParameterError);
}

TEST_CASE("sample_noise moments") {
  Rng rng(1);
  const NoiseProfile white = make_profile(NoiseKind::White, 8);
  CHECK(sample_noise(white, 0.0, rng).values.cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(sample_noise(white, -1.0, rng), ParameterError);

  const int draws = 100000;
  const double sigma = 0.7;
  RVector acc = RVector::Zero(8);
  for (int i = 0; i < draws; ++i) acc += sample_noise(white, sigma, rng).values.cwiseAbs2();
  acc /= draws;
  for (Index k = 0; k < 8; ++k) CHECK(std::abs(acc(k) / (sigma * sigma) - 1.0) < 0.03);

  const NoiseProfile imp = make_profile(NoiseKind::Impulse, 64);
  RVector acc2 = RVector::Zero(64);
  for (int i = 0; i < draws; ++i) acc2 += sample_noise(imp, 1.0, rng).values.cwiseAbs2();
  const double measured = (acc2(0) + acc2(32)) / 2.0 / ((acc2.sum() - acc2(0) - acc2(32)) / 62.0);
  const double expected = imp.gains(0) / imp.gains(1);
  CHECK(std::abs(measured / expected - 1.0) < 0.10);
}

TEST_CASE("demod_noise_variance: OFDM, white, dimension errors") {
  const NoiseProfile imp = make_profile(NoiseKind::Impulse, 64);
  const RVector v = demod_noise_variance(CMatrix::Identity(64, 64), imp, 0.5);
  CHECK((v - 0.25 * imp.gains).cwiseAbs().maxCoeff() < 1e-15);

  const NoiseProfile white = make_profile(NoiseKind::White, 16);
  for (const auto& cfg : {WaveformConfig::otfs(4, 4), WaveformConfig::afdm(16, 0.37, 0.1)}) {
    const RVector vw = demod_noise_variance(q_inv(cfg), white, 2.0);
    CHECK((vw.array() - 4.0).abs().maxCoeff() < 1e-12);
  }
  CHECK_THROWS_AS(demod_noise_variance(CMatrix::Identity(8, 8), white, 1.0), DimensionError);
}

TEST_CASE("demod_noise_variance: OTFS impulse profile against Monte Carlo") {
  const NoiseProfile imp = make_profile(NoiseKind::Impulse, 64);
  const CMatrix qi = q_inv(WaveformConfig::otfs(8, 8));
  const double sigma = 1.0;
  const RVector analytic = demod_noise_variance(qi, imp, sigma);

  Rng rng(99);
  const int draws = 100000;
  RVector sum = RVector::Zero(64), sum_sq = RVector::Zero(64);
  for (int i = 0; i < draws; ++i) {
    const RVector p = (qi * sample_noise(imp, sigma, rng).values).cwiseAbs2();
    sum += p;
    sum_sq += p.cwiseAbs2();
  }
  const RVector mean = sum / draws;
  for (Index m = 0; m < 64; ++m) {
    const double var = sum_sq(m) / draws - mean(m) * mean(m);
    const double se = std::sqrt(var / draws);
    CHECK(std::abs(mean(m) - analytic(m)) <= 3.0 * se);
  }
}

TEST_CASE("whitening_std") {
  CHECK(whitening_std(RVector::Constant(9, 3.3)) < 1e-15);
  RVector two(2);
  two << 2.0, 0.0;
  CHECK(std::abs(whitening_std(two) - 1.0) < 1e-15);
  const WhiteningReport r = whitening_report(two, "x");
  CHECK(r.mean == 1.0);
  CHECK(r.std_dev == 1.0);
}

TEST_CASE("energy conservation under unitary demodulation") {
  for (auto kind : {NoiseKind::Impulse, NoiseKind::Interferer, NoiseKind::Equalized}) {
    const NoiseProfile p = make_profile(kind, 64);
    for (const auto& cfg : {WaveformConfig::ofdm(64), WaveformConfig::otfs(8, 8), WaveformConfig::afdm(64, -4, 0.1),
                            WaveformConfig::afdm(64, 0.5, 0)}) {
      const RVector v = demod_noise_variance(q_inv(cfg), p, 0.3);
      CHECK(std::abs(v.sum() / (0.09 * p.trace()) - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("OTFS locality: perturbing bins outside a row's support") {
  const Index k = 8, l = 8, n = 64;
  const CMatrix qi = q_inv(WaveformConfig::otfs(k, l));
  const NoiseProfile base = make_profile(NoiseKind::Interferer, n);
  const RVector v0 = demod_noise_variance(qi, base, 1.0);
  for (Index u : {0, 13, 63}) {
    const Index mu = u / k;
    NoiseProfile perturbed = base;
    for (Index v = 0; v < n; ++v) {
      if ((v - mu) % l != 0) perturbed.gains(v) *= 3.0 + double(v % 5);
    }
    const RVector v1 = demod_noise_variance(qi, perturbed, 1.0);
    CHECK(v1(u) == doctest::Approx(v0(u)).epsilon(1e-14));
  }
}

TEST_CASE("whitening ordering over the default profiles") {
  const Index n = 64;
  for (auto kind : {NoiseKind::Impulse, NoiseKind::Interferer, NoiseKind::Equalized}) {
    INFO(to_string(kind));
    const NoiseProfile p = make_profile(kind, n);
    const double s_ofdm = whitening_std(demod_noise_variance(q_inv(WaveformConfig::ofdm(n)), p, 1.0));
    const double s_otfs = whitening_std(demod_noise_variance(q_inv(WaveformConfig::otfs(8, 8)), p, 1.0));
    const double s_afdm = whitening_std(demod_noise_variance(q_inv(WaveformConfig::afdm(n, -4, 0.1)), p, 1.0));
    CHECK(s_afdm < s_otfs);
    CHECK(s_otfs < s_ofdm);
  }
}

TEST_CASE("OTFS whitening degrades with L") {
  const Index n = 64;
  const NoiseProfile p = make_profile(NoiseKind::Impulse, n);
  double prev = -1.0;
  for (Index l : {1, 2, 4, 8, 16, 32, 64}) {
    const double s = whitening_std(demod_noise_variance(q_inv(WaveformConfig::otfs_with_doppler(n, l)), p, 1.0));
    CHECK(s >= prev - 1e-9 * std::max(1.0, prev));
    prev = s;
  }
}
