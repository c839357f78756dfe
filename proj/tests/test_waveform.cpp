#include <random>

#include "doctest.h"
#include "mcw/dft.hpp"
#include "mcw/qam.hpp"
#include "mcw/waveform.hpp"
#include "oracles.hpp"

using namespace mcw;

namespace {

CVector random_qam(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  QamConstellation qam(16);
  Bits bits(static_cast<std::size_t>(4 * n));
  for (auto& b : bits) b = static_cast<std::uint8_t>(rng() & 1);
  return qam.map(bits);
}

std::vector<WaveformConfig> sample_configs(Index n) {
  std::vector<WaveformConfig> v{WaveformConfig::ofdm(n), WaveformConfig::afdm(n, -4.0, 0.1),
                                WaveformConfig::afdm(n, 0.5, 0.0), WaveformConfig::afdm(n, -4.01, 0.1)};
  for (Index l = 1; l <= n; ++l) {
    if (n % l == 0) v.push_back(WaveformConfig::otfs_with_doppler(n, l));
  }
  return v;
}

}  // namespace

TEST_CASE("dft_matrix small sizes and unitarity") {
  const CMatrix f1 = dft_matrix(1);
  CHECK(f1.rows() == 1);
  CHECK(std::abs(f1(0, 0) - cplx(1.0, 0.0)) < 1e-15);

  const CMatrix f2 = dft_matrix(2);
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(f2(0, 0) - h) < 1e-15);
  CHECK(std::abs(f2(0, 1) - h) < 1e-15);
  CHECK(std::abs(f2(1, 0) - h) < 1e-15);
  CHECK(std::abs(f2(1, 1) + h) < 1e-15);

  const CMatrix f8 = dft_matrix(8);
  CHECK(oracle::maxabs(f8 * f8.adjoint() - CMatrix::Identity(8, 8)) < 1e-12);
  CHECK(oracle::maxabs(f8 - oracle::dft(8)) < 1e-13);

  CHECK_THROWS_AS(dft_matrix(0), DimensionError);
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(WaveformConfig::ofdm(0), ConfigError);
  CHECK_THROWS_AS(WaveformConfig::otfs_with_doppler(12, 5), ConfigError);
  WaveformConfig bad;
  bad.kind = WaveformKind::Otfs;
  bad.size = 12;
  bad.delay_bins = 3;
  bad.doppler_bins = 3;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(build_precoder(bad), ConfigError);
  CHECK(WaveformConfig::otfs(12, 10).size == 120);
}

TEST_CASE("build_precoder matches direct products") {
  CHECK(oracle::maxabs(build_precoder(WaveformConfig::ofdm(4)).forward - CMatrix::Identity(4, 4)) == 0.0);
  CHECK(oracle::maxabs(build_precoder(WaveformConfig::afdm(4, 0.0, 0.0)).forward - CMatrix::Identity(4, 4)) <
        1e-12);
  CHECK(oracle::maxabs(build_precoder(WaveformConfig::otfs(2, 2)).forward - oracle::otfs_precoder(2, 2)) < 1e-12);
  CHECK(oracle::maxabs(build_precoder(WaveformConfig::otfs(3, 4)).forward - oracle::otfs_precoder(3, 4)) < 1e-12);
  CHECK(oracle::maxabs(build_precoder(WaveformConfig::afdm(12, -4.0, 0.1)).forward -
                       oracle::afdm_precoder(12, -4.0, 0.1)) < 1e-12);
  // L = N is OFDM
  CHECK(oracle::maxabs(build_precoder(WaveformConfig::otfs(1, 8)).forward - CMatrix::Identity(8, 8)) < 1e-12);
}

TEST_CASE("every precoder is unitary and its inverse is the adjoint") {
  for (Index n : {4, 12, 16}) {
    for (const auto& cfg : sample_configs(n)) {
      INFO(cfg.label());
      const PrecoderMatrix p = build_precoder(cfg);
      CHECK(oracle::maxabs(p.forward.adjoint() * p.forward - CMatrix::Identity(n, n)) < 1e-10);
      CHECK(oracle::maxabs(p.inverse * p.forward - CMatrix::Identity(n, n)) < 1e-10);
      CHECK(oracle::maxabs(p.inverse - p.forward.adjoint()) < 1e-10);
    }
  }
}

TEST_CASE("modulate: impulse responses") {
  const Index n = 16;
  CVector e0 = CVector::Zero(n);
  e0(0) = 1.0;

  const CVector x_ofdm = modulate(WaveformConfig::ofdm(n), DataSignal(e0)).values;
  for (Index k = 0; k < n; ++k) CHECK(std::abs(x_ofdm(k) - 1.0 / std::sqrt(double(n))) < 1e-12);

  for (double alpha : {0.0, 0.37}) {
    const CVector x = modulate(WaveformConfig::afdm(n, 2.5, alpha), DataSignal(e0)).values;
    for (Index k = 0; k < n; ++k) {
      const cplx expected = std::exp(cplx(0.0, oracle::pi * 2.5 * double(k * k) / double(n))) / std::sqrt(double(n));
      CHECK(std::abs(x(k) - expected) < 1e-12);
    }
  }

  // L = 1: single-carrier FDM, x = c
  const CVector c = random_qam(n, 3);
  CHECK(oracle::maxabs(modulate(WaveformConfig::otfs(n, 1), DataSignal(c)).values - c) < 1e-12);
  CHECK(oracle::maxabs(build_precoder(WaveformConfig::otfs(n, 1)).forward - oracle::dft(int(n))) < 1e-12);
}

TEST_CASE("modulate preserves energy and rejects wrong lengths") {
  const CVector c = random_qam(16, 11);
  for (const auto& cfg : sample_configs(16)) {
    const CVector x = modulate(cfg, DataSignal(c)).values;
    CHECK(std::abs(x.norm() - c.norm()) < 1e-10);
  }
  CHECK_THROWS_AS(modulate(WaveformConfig::ofdm(8), DataSignal(CVector::Zero(7))), DimensionError);
  CHECK_THROWS_AS(demodulate(WaveformConfig::afdm(8, 1, 0), FrequencySignal(CVector::Zero(9))), DimensionError);
}

TEST_CASE("operator form agrees with dense precoder") {
  for (Index n : {1, 4, 12, 16, 64, 120, 256}) {
    std::vector<WaveformConfig> cfgs{WaveformConfig::ofdm(n), WaveformConfig::afdm(n, -4.0, 0.1),
                                     WaveformConfig::afdm(n, 0.3, 0.0)};
    for (Index l : {Index(1), Index(2), Index(4), Index(10), n}) {
      if (n % l == 0) cfgs.push_back(WaveformConfig::otfs_with_doppler(n, l));
    }
    const CVector c = random_qam(n, static_cast<std::uint64_t>(n));
    for (const auto& cfg : cfgs) {
      INFO(cfg.label() << " N=" << n);
      const PrecoderMatrix dense = build_precoder(cfg);
      const Precoder op(cfg);
      CHECK(oracle::maxabs(op.apply(c) - dense.forward * c) < 1e-9);
      CHECK(oracle::maxabs(op.apply_inverse(c) - dense.inverse * c) < 1e-9);
      CHECK(oracle::maxabs(op.to_time(c) - oracle::dft(int(n)).adjoint() * (dense.forward * c)) < 1e-9);
    }
  }
}

TEST_CASE("demodulate inverts the precoder") {
  for (Index n : {4, 12, 16, 64}) {
    const CVector c = random_qam(n, 100 + static_cast<std::uint64_t>(n));
    for (const auto& cfg : sample_configs(n)) {
      INFO(cfg.label());
      const CVector z = Precoder(cfg).apply(c);
      CHECK(oracle::maxabs(demodulate(cfg, FrequencySignal(z)).values - c) < 1e-10);
      // identity channel, through the time domain
      const CVector x = modulate(cfg, DataSignal(c)).values;
      const CVector rf = oracle::dft(int(n)) * x;
      CHECK(oracle::maxabs(demodulate(cfg, FrequencySignal(rf)).values - c) < 1e-10);
    }
  }
  const CVector v = random_qam(8, 1);
  CHECK(oracle::maxabs(demodulate(WaveformConfig::ofdm(8), FrequencySignal(v)).values - v) == 0.0);
}

TEST_CASE("demodulation preserves noise norm") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  CVector w(16);
  for (auto& x : w) x = cplx(g(rng), g(rng));
  for (const auto& cfg : sample_configs(16)) {
    CHECK(std::abs(demodulate(cfg, FrequencySignal(w)).values.norm() - w.norm()) < 1e-10);
  }
}

TEST_CASE("otfs_inverse_entry closed form") {
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(otfs_inverse_entry(0, 0, 2, 2) - h) < 1e-12);
  CHECK(std::abs(otfs_inverse_entry(0, 1, 2, 2)) == 0.0);
  CHECK(std::abs(otfs_inverse_entry(1, 2, 2, 2) + h) < 1e-12);
  CHECK_THROWS_AS(otfs_inverse_entry(4, 0, 2, 2), IndexError);
  CHECK_THROWS_AS(otfs_inverse_entry(0, -1, 2, 2), IndexError);

  for (auto [k, l] : {std::pair<Index, Index>{2, 2}, {8, 8}, {12, 10}, {3, 5}, {1, 7}, {7, 1}}) {
    const Index n = k * l;
    const CMatrix brute = oracle::kron(oracle::dft(int(l)), CMatrix::Identity(k, k)) * oracle::dft(int(n)).adjoint();
    double err = 0.0;
    for (Index u = 0; u < n; ++u) {
      Index row_nonzeros = 0;
      double row_norm = 0.0;
      for (Index v = 0; v < n; ++v) {
        const cplx e = otfs_inverse_entry(u, v, k, l);
        err = std::max(err, std::abs(e - brute(u, v)));
        if (std::abs(e) > 0.0) {
          ++row_nonzeros;
          CHECK(std::abs(std::abs(e) - std::sqrt(double(l) / double(n))) < 1e-12);
        }
        row_norm += std::norm(e);
      }
      CHECK(row_nonzeros == k);
      CHECK(std::abs(row_norm - 1.0) < 1e-12);
    }
    CHECK(err < 1e-10);
    CHECK(oracle::maxabs(build_precoder(WaveformConfig::otfs(k, l)).inverse - brute) < 1e-10);
  }
}

TEST_CASE("afdm_inverse_column") {
  // q = 0: DFT of the all-ones sequence
  const CVector c0 = afdm_inverse_column(8, 0.0);
  CHECK(std::abs(c0(0) - std::sqrt(8.0)) < 1e-12);
  for (Index u = 1; u < 8; ++u) CHECK(std::abs(c0(u)) < 1e-12);

  // q = 4, N = 8: N/q = 2 nonzeros, evenly spaced
  const CVector c4 = afdm_inverse_column(8, 4.0);
  std::vector<Index> nz;
  for (Index u = 0; u < 8; ++u) {
    if (std::abs(c4(u)) > 1e-9 * c4.cwiseAbs().maxCoeff()) nz.push_back(u);
  }
  REQUIRE(nz.size() == 2);
  CHECK(nz[1] - nz[0] == 4);

  const CVector c05 = afdm_inverse_column(8, 0.5);
  for (Index u = 0; u < 8; ++u) CHECK(std::abs(c05(u)) > 1e-6);

  // circulant factor of the demodulator, scaled by sqrt(N)
  for (double q : {-4.0, 0.5, 1.7}) {
    const int n = 12;
    const CMatrix factor = oracle::dft(n) * oracle::chirp(n, q).adjoint() * oracle::dft(n).adjoint();
    const CVector col = afdm_inverse_column(n, q);
    CHECK(oracle::maxabs(factor.col(0) - col / std::sqrt(double(n))) < 1e-12);
    CHECK(oracle::maxabs(oracle::circulant(factor.col(0)) - factor) < 1e-12);
    // Q^-1 = Lambda_alpha^H F Lambda_q^H F^H
    const CMatrix q_inv = oracle::chirp(n, 0.1).adjoint() * factor;
    CHECK(oracle::maxabs(build_precoder(WaveformConfig::afdm(n, q, 0.1)).inverse - q_inv) < 1e-10);
  }
}

TEST_CASE("reduction chain") {
  for (Index n : {4, 12, 16}) {
    const CMatrix ofdm = build_precoder(WaveformConfig::ofdm(n)).forward;
    CHECK(oracle::maxabs(build_precoder(WaveformConfig::afdm(n, 0.0, 0.0)).forward - ofdm) < 1e-10);
    CHECK(oracle::maxabs(build_precoder(WaveformConfig::otfs(1, n)).forward - ofdm) < 1e-10);
    CHECK(oracle::maxabs(build_precoder(WaveformConfig::otfs(n, 1)).forward - dft_matrix(n)) < 1e-10);
  }
}
