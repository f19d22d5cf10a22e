#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "afdmsim/plim.hpp"
#include "afdmsim/rng.hpp"
#include "oracles.hpp"

using namespace afdmsim;
using namespace afdmsim::plim;

namespace {

PlimConfig make_cfg(int L, int M, double beta, int U) { return PlimConfig{L, M, beta, U}; }

Bits random_bits(Rng& rng, int n) {
  Bits b(n);
  for (auto& v : b) v = static_cast<uint8_t>(rng.bit());
  return b;
}

}  // namespace

TEST_CASE("qpsk gray mapping matches the explicit four-point table") {
  // Gray sequence 00,01,11,10 walks the circle 0, π/2, π, 3π/2.
  const struct {
    Bits bits;
    cplx point;
  } table[] = {
      {{0, 0}, {1.0, 0.0}},
      {{0, 1}, {0.0, 1.0}},
      {{1, 1}, {-1.0, 0.0}},
      {{1, 0}, {0.0, -1.0}},
  };
  for (const auto& entry : table) {
    const cvec s = psk_modulate(entry.bits, 4);
    REQUIRE(s.size() == 1);
    CHECK(std::abs(s[0] - entry.point) < 1e-12);
  }
}

TEST_CASE("psk symbols have unit modulus and Gray neighbors differ in one bit") {
  for (int M : {2, 4, 8}) {
    const int bps = M == 2 ? 1 : (M == 4 ? 2 : 3);
    std::vector<uint32_t> index_to_bits(M, 0);
    for (uint32_t v = 0; v < static_cast<uint32_t>(M); ++v) {
      Bits bits(bps);
      for (int b = 0; b < bps; ++b) bits[b] = (v >> (bps - 1 - b)) & 1u;
      const cvec s = psk_modulate(bits, M);
      CHECK(std::abs(std::abs(s[0]) - 1.0) < 1e-12);
      // Recover the constellation index from the angle.
      double ang = std::arg(s[0]);
      if (ang < 0) ang += kTwoPi;
      const int idx = static_cast<int>(std::lround(ang / (kTwoPi / M))) % M;
      index_to_bits[idx] = v;
    }
    for (int m = 0; m < M; ++m) {
      const uint32_t diff = index_to_bits[m] ^ index_to_bits[(m + 1) % M];
      CHECK(__builtin_popcount(diff) == 1);
    }
  }
}

TEST_CASE("psk demodulation picks the nearest point") {
  CHECK(psk_demodulate({cplx(1.0, 0.0)}, 4) == Bits{0, 0});
  // Verify 0.9 + 0.1j against distances to all four points.
  const cplx v(0.9, 0.1);
  int best = 0;
  double best_d = 1e300;
  for (int m = 0; m < 4; ++m) {
    const double d = std::abs(v - std::polar(1.0, kTwoPi * m / 4.0));
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  CHECK(best == 0);
  CHECK(psk_demodulate({v}, 4) == Bits{0, 0});
}

TEST_CASE("psk round trip is the identity for random payloads") {
  Rng rng(11);
  for (int M : {2, 4, 8}) {
    const int bps = M == 2 ? 1 : (M == 4 ? 2 : 3);
    for (int rep = 0; rep < 64; ++rep) {
      Bits bits = random_bits(rng, 10 * bps);
      CHECK(psk_demodulate(psk_modulate(bits, M), M) == bits);
    }
  }
}

TEST_CASE("psk input validation") {
  CHECK_THROWS_AS(psk_modulate({1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(psk_modulate({1, 0}, 3), std::invalid_argument);
}

TEST_CASE("balanced pattern ranking matches exhaustive enumeration") {
  for (int U : {2, 4, 6, 8}) {
    const auto all = oracle::enumerate_balanced(U);
    REQUIRE(static_cast<u128>(all.size()) == binom(U, U / 2));
    for (size_t r = 0; r < all.size(); ++r) {
      CHECK(balanced_pattern_unrank(r, U) == all[r]);
      CHECK(static_cast<size_t>(balanced_pattern_rank(all[r])) == r);
    }
  }
  // Spec'd corner points of the enumeration.
  CHECK(balanced_pattern_unrank(0, 4) == std::vector<uint8_t>{1, 1, 0, 0});
  CHECK(balanced_pattern_unrank(5, 4) == std::vector<uint8_t>{0, 0, 1, 1});
  CHECK(balanced_pattern_rank({1, 0}) == 0);
  CHECK(balanced_pattern_rank({0, 1}) == 1);
}

TEST_CASE("pattern rank round trip holds for larger blocks") {
  Rng rng(5);
  for (int U : {2, 4, 8, 16, 64}) {
    const u128 count = binom(U, U / 2);
    for (int rep = 0; rep < 200; ++rep) {
      u128 r = rng.next_u64();
      if (U == 64) r = (r << 32) ^ rng.next_u64();
      r %= count;
      CHECK(balanced_pattern_rank(balanced_pattern_unrank(r, U)) == r);
    }
  }
}

TEST_CASE("pattern ranking rejects invalid input") {
  CHECK_THROWS_AS(balanced_pattern_unrank(6, 4), std::domain_error);  // C(4,2) = 6
  CHECK_THROWS_AS(balanced_pattern_rank({1, 1, 1, 0}), std::domain_error);
  CHECK_THROWS_AS(balanced_pattern_rank({1, 0, 0}), std::domain_error);
}

TEST_CASE("plim encode follows the power-level mapping") {
  // Degenerate beta removes the power modulation.
  {
    PlimConfig cfg = make_cfg(8, 4, 1e-12, 0);
    Rng rng(3);
    const Bits im = random_bits(rng, 8);
    const Bits psk = random_bits(rng, 16);
    const auto enc = plim_encode(im, psk, cfg);
    const cvec s = psk_modulate(psk, 4);
    for (int l = 0; l < 8; ++l) CHECK(std::abs(enc.x[l] - s[l]) < 1e-6);
  }
  // z = 1, beta = 0.5, s = 1 -> sqrt(1.5).
  {
    PlimConfig cfg = make_cfg(1, 2, 0.5, 0);
    const auto enc = plim_encode({1}, {0}, cfg);
    CHECK(enc.codeword.z[0] == 1);
    CHECK(enc.x[0].real() == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
    CHECK(enc.x[0].imag() == doctest::Approx(0.0).epsilon(1e-12));
  }
  // Grouped U=2: one IM bit selects [1,0] or [0,1].
  {
    PlimConfig cfg = make_cfg(2, 2, 0.5, 2);
    CHECK(plim_encode({0}, {0, 0}, cfg).codeword.z == std::vector<uint8_t>{1, 0});
    CHECK(plim_encode({1}, {0, 0}, cfg).codeword.z == std::vector<uint8_t>{0, 1});
  }
}

TEST_CASE("plim encode validates bit lengths and config") {
  PlimConfig cfg = make_cfg(8, 4, 0.5, 4);
  Rng rng(9);
  const Bits psk = random_bits(rng, 16);
  CHECK_THROWS_AS(plim_encode(random_bits(rng, 3), psk, cfg), std::invalid_argument);
  CHECK_THROWS_AS(plim_encode(random_bits(rng, 4), random_bits(rng, 15), cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_cfg(8, 4, 1.5, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_cfg(8, 3, 0.5, 0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_cfg(8, 4, 0.5, 3).validate(), std::invalid_argument);
  CHECK_THROWS_AS(make_cfg(8, 4, 0.5, 6).validate(), std::invalid_argument);  // 6 does not divide 8
}

TEST_CASE("alpha assignment matches the indicators and conserves block power") {
  Rng rng(17);
  for (double beta : {0.25, 0.5, 0.75}) {
    PlimConfig cfg = make_cfg(32, 4, beta, 8);
    const Bits im = random_bits(rng, cfg.im_bits_per_frame());
    const Bits psk = random_bits(rng, cfg.psk_bits_per_frame());
    const auto enc = plim_encode(im, psk, cfg);
    for (int l = 0; l < cfg.L; ++l) {
      CHECK(enc.codeword.alpha[l] ==
            doctest::Approx(enc.codeword.z[l] ? 1.0 + beta : 1.0 - beta));
      CHECK(std::abs(enc.x[l]) ==
            doctest::Approx(std::sqrt(enc.codeword.alpha[l])).epsilon(1e-12));
    }
    for (int g = 0; g < cfg.num_blocks(); ++g) {
      double block_power = 0.0;
      for (int u = 0; u < 8; ++u) block_power += enc.codeword.alpha[g * 8 + u];
      CHECK(block_power == doctest::Approx(8.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("average power over random indicators is one") {
  Rng rng(23);
  const double beta = 0.5;
  double acc = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) acc += rng.bit() ? 1.0 + beta : 1.0 - beta;
  CHECK(acc / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("im bits -> codeword -> bits is the identity") {
  Rng rng(31);
  for (int U : {0, 2, 4, 8, 16}) {
    PlimConfig cfg = make_cfg(32, 4, 0.5, U);
    for (int rep = 0; rep < 100; ++rep) {
      const Bits im = random_bits(rng, cfg.im_bits_per_frame());
      const Bits psk = random_bits(rng, cfg.psk_bits_per_frame());
      const auto enc = plim_encode(im, psk, cfg);
      CHECK(im_bits_from_indicators(enc.codeword.z, cfg) == im);
    }
  }
}

TEST_CASE("data rates reproduce the closed forms at L=128") {
  PlimConfig cfg = make_cfg(128, 4, 0.5, 0);
  const auto rep = data_rates(cfg, 64);
  CHECK(rep.r_gamma_ungrouped == doctest::Approx(384.0).epsilon(1e-12));
  CHECK(rep.r_alpha == doctest::Approx(256.0).epsilon(1e-12));
  // Against the log-gamma oracle and the frozen value.
  const double r_beta_expected = 128.0 + oracle::log2_binom(128, 64);
  CHECK(std::abs(rep.r_beta - r_beta_expected) < 1e-9);
  CHECK(rep.r_beta == doctest::Approx(252.17143420017372).epsilon(1e-12));
  CHECK(rep.im_payload_bits == 128);

  // Grouped U=64: 2 blocks of floor(log2 C(64,32)) = 60 bits -> 120 payload
  // bits, 376 total, close to 8PSK-AFDM's 384.
  PlimConfig grouped = make_cfg(128, 4, 0.5, 64);
  const auto rep64 = data_rates(grouped, 64);
  CHECK(rep64.im_payload_bits == 120);
  CHECK(rep64.im_payload_bits + grouped.psk_bits_per_frame() == 376);
}

TEST_CASE("grouped exact rate tracks the log-gamma oracle across block sizes") {
  for (int U : {2, 4, 8, 16, 32, 64, 128}) {
    PlimConfig cfg = make_cfg(128, 4, 0.5, U);
    const auto rep = data_rates(cfg, 64);
    const double expected = 256.0 + (128.0 / U) * oracle::log2_binom(U, U / 2);
    CHECK(std::abs(rep.r_gamma - expected) < 1e-9);
  }
}

TEST_CASE("stirling approximation is within one percent for U >= 8") {
  for (int U : {8, 16, 32, 64, 128}) {
    PlimConfig cfg = make_cfg(128, 4, 0.5, U);
    const auto rep = data_rates(cfg, 64);
    CHECK(std::abs(rep.r_gamma - rep.r_gamma_stirling) / rep.r_gamma < 0.01);
  }
}

TEST_CASE("rate ordering holds for QPSK and 8PSK but fails for BPSK at Z = L/2") {
  // R_beta < R_alpha needs log2 C(L,Z) < (L-Z) log2 M; at Z = L/2 = 64 the
  // left side is 124.17 bits, so BPSK (right side 64 bits) cannot satisfy it.
  for (int M : {4, 8}) {
    for (int U : {2, 4, 8, 16, 32, 64, 128}) {
      PlimConfig cfg = make_cfg(128, M, 0.5, U);
      CHECK(data_rates(cfg, 64).ordering_holds);
    }
  }
  PlimConfig bpsk = make_cfg(128, 2, 0.5, 8);
  const auto rep = data_rates(bpsk, 64);
  CHECK_FALSE(rep.ordering_holds);
  CHECK(rep.r_beta > rep.r_alpha);
}

TEST_CASE("rate ordering holds for BPSK at sparse activation") {
  PlimConfig bpsk = make_cfg(128, 2, 0.5, 8);
  CHECK(data_rates(bpsk, 16).ordering_holds);
}

TEST_CASE("grouped rate grows with block size") {
  double prev = 0.0;
  for (int U : {2, 4, 8, 16, 32, 64, 128}) {
    PlimConfig cfg = make_cfg(128, 4, 0.5, U);
    const double r = data_rates(cfg, 64).r_gamma;
    CHECK(r > prev);
    prev = r;
  }
  // U=2 carries exactly one IM bit per block, i.e. L/2 payload bits.
  CHECK(data_rates(make_cfg(128, 4, 0.5, 2), 64).im_payload_bits == 64);
}

TEST_CASE("binomials and payload widths are exact") {
  CHECK(binom(4, 2) == 6);
  CHECK(binom(8, 4) == 70);
  CHECK(floor_log2_u128(binom(8, 4)) == 6);
  CHECK(floor_log2_u128(binom(2, 1)) == 1);
  CHECK(floor_log2_u128(binom(64, 32)) == 60);
  CHECK(floor_log2_u128(binom(128, 64)) == 124);
  const double log2c = oracle::log2_binom(128, 64);
  CHECK(log2c == doctest::Approx(124.17143420017372).epsilon(1e-12));
}
