#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "afdmsim/afdm.hpp"
#include "afdmsim/fft.hpp"
#include "afdmsim/rng.hpp"
#include "oracles.hpp"

using namespace afdmsim;
using namespace afdmsim::afdm;

namespace {

cvec random_vec(Rng& rng, int n) {
  cvec v(n);
  for (auto& x : v) x = rng.cgaussian(1.0);
  return v;
}

double vec_dist(const cvec& a, const cvec& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) acc += std::norm(a[i] - b[i]);
  return std::sqrt(acc);
}

double vec_norm(const cvec& a) {
  double acc = 0.0;
  for (const auto& v : a) acc += std::norm(v);
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("select_c1 evaluates the guard formula") {
  CHECK(select_c1(0.0, 0, 128) == doctest::Approx(1.0 / 256.0).epsilon(1e-15));
  CHECK(select_c1(2.0, 1, 128) == doctest::Approx(7.0 / 256.0).epsilon(1e-15));
  double prev = -1.0;
  for (double nu = 0.0; nu <= 6.0; nu += 0.5) {
    const double c1 = select_c1(nu, 2, 128);
    CHECK(c1 > prev);
    prev = c1;
  }
  CHECK_THROWS_AS(select_c1(-1.0, 0, 128), std::domain_error);
  CHECK_THROWS_AS(select_c1(0.0, 5, 128), std::domain_error);
}

TEST_CASE("daft matrix reduces to the unitary DFT at zero chirp rates") {
  for (int L : {4, 16}) {
    const CMat a = daft_matrix({L, 0.0, 0.0});
    const auto f = oracle::dense_dft_unitary(L);
    double worst = 0.0;
    for (int k = 0; k < L; ++k)
      for (int l = 0; l < L; ++l) worst = std::max(worst, std::abs(a(k, l) - f[k][l]));
    CHECK(worst < 1e-12);
  }
}

TEST_CASE("daft matrix at L=2, c1=1/4 matches the hand-computed matrix") {
  const CMat a = daft_matrix({2, 0.25, 0.0});
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(a(0, 0) - cplx(s, 0)) < 1e-12);
  CHECK(std::abs(a(0, 1) - cplx(s, 0)) < 1e-12);
  CHECK(std::abs(a(1, 0) - cplx(0, -s)) < 1e-12);
  CHECK(std::abs(a(1, 1) - cplx(0, s)) < 1e-12);
}

TEST_CASE("daft matrix entries follow the chirp-DFT-chirp formula") {
  const int L = 8;
  const double c1 = select_c1(1.0, 1, L), c2 = 1.0 / (4.0 * L * L);
  const CMat a = daft_matrix({L, c1, c2});
  const auto ref = oracle::dense_daft(L, c1, c2);
  for (int k = 0; k < L; ++k)
    for (int l = 0; l < L; ++l) CHECK(std::abs(a(k, l) - ref[k][l]) < 1e-12);
}

TEST_CASE("daft matrix is unitary across sizes and chirp rates") {
  for (int L : {2, 64, 128, 256}) {
    for (double c2 : {0.0, 1.0 / (4.0 * L * L)}) {
      const AfdmParams p{L, select_c1(2.0, 1, L), c2};
      const CMat a = daft_matrix(p);
      CMat prod = matmul(a, a.adjoint());
      prod.add_scaled_identity(-1.0);
      CHECK(prod.frobenius_norm() < 1e-10);
    }
  }
}

TEST_CASE("modulating an impulse with zero chirps spreads it flat") {
  const int L = 16;
  cvec x(L, cplx(0.0, 0.0));
  x[0] = 1.0;
  const cvec y = afdm_modulate(x, {L, 0.0, 0.0});
  for (const auto& v : y) CHECK(std::abs(v - cplx(0.25, 0.0)) < 1e-12);
}

TEST_CASE("fast transforms agree with the dense matrix to 1e-10") {
  Rng rng(7);
  for (int L : {2, 8, 64, 128, 256}) {
    const AfdmParams p{L, select_c1(2.0, 1, L), 1.0 / (4.0 * L * L)};
    const auto a = oracle::dense_daft(L, p.c1, p.c2);
    const auto ah = oracle::mat_adjoint(a);
    const cvec x = random_vec(rng, L);
    CHECK(vec_dist(afdm_modulate(x, p), oracle::mat_vec(ah, x)) < 1e-10);
    CHECK(vec_dist(afdm_demodulate(x, p), oracle::mat_vec(a, x)) < 1e-10);
  }
}

TEST_CASE("fast transforms cover non-power-of-two lengths") {
  Rng rng(19);
  const int L = 12;
  const AfdmParams p{L, select_c1(1.0, 0, L), 1.0 / (4.0 * L * L)};
  const auto a = oracle::dense_daft(L, p.c1, p.c2);
  const cvec x = random_vec(rng, L);
  CHECK(vec_dist(afdm_demodulate(x, p), oracle::mat_vec(a, x)) < 1e-10);
  CHECK(vec_dist(afdm_demodulate(afdm_modulate(x, p), p), x) < 1e-10);
}

TEST_CASE("round trip and Parseval hold for random frames") {
  Rng rng(13);
  for (int L : {64, 128}) {
    for (double c2 : {0.0, 1.0 / (4.0 * L * L)}) {
      const AfdmParams p{L, select_c1(3.0, 2, L), c2};
      for (int rep = 0; rep < 20; ++rep) {
        const cvec x = random_vec(rng, L);
        const cvec y = afdm_modulate(x, p);
        CHECK(std::abs(vec_norm(y) - vec_norm(x)) < 1e-12 * vec_norm(x));
        CHECK(vec_dist(afdm_demodulate(y, p), x) < 1e-10);
      }
    }
  }
}

TEST_CASE("zero chirp rates collapse both directions to the DFT") {
  Rng rng(29);
  const int L = 32;
  const cvec r = random_vec(rng, L);
  const AfdmParams p{L, 0.0, 0.0};
  CHECK(vec_dist(afdm_demodulate(r, p), dft_unitary(r)) < 1e-12);
  CHECK(vec_dist(afdm_modulate(r, p), idft_unitary(r)) < 1e-12);
}

TEST_CASE("demodulation is linear") {
  Rng rng(37);
  const int L = 64;
  const AfdmParams p{L, select_c1(2.0, 1, L), 0.0};
  const cvec r1 = random_vec(rng, L), r2 = random_vec(rng, L);
  const cplx a(0.7, -0.3), b(-1.1, 0.4);
  cvec mix(L);
  for (int i = 0; i < L; ++i) mix[i] = a * r1[i] + b * r2[i];
  const cvec lhs = afdm_demodulate(mix, p);
  const cvec d1 = afdm_demodulate(r1, p), d2 = afdm_demodulate(r2, p);
  double worst = 0.0;
  for (int i = 0; i < L; ++i) worst = std::max(worst, std::abs(lhs[i] - (a * d1[i] + b * d2[i])));
  CHECK(worst < 1e-10);
}

TEST_CASE("transforms validate input lengths") {
  const AfdmParams p{8, 0.0, 0.0};
  CHECK_THROWS_AS(afdm_modulate(cvec(7), p), std::invalid_argument);
  CHECK_THROWS_AS(afdm_demodulate(cvec(9), p), std::invalid_argument);
  CHECK_THROWS_AS(daft_matrix({1, 0.0, 0.0}), std::invalid_argument);
}
