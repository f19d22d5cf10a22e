// Independent reference implementations used only by tests. Everything here
// is deliberately written the slow, obvious way (direct sums, dense algebra,
// explicit enumeration) so it shares no code path with the library.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "afdmsim/types.hpp"

namespace oracle {

using afdmsim::cplx;
using afdmsim::cvec;
using afdmsim::kTwoPi;

using Mat = std::vector<cvec>;  // row-major dense matrix

inline Mat dense_dft_unitary(int n) {
  Mat f(n, cvec(n));
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      f[k][l] = std::polar(scale, -kTwoPi * static_cast<double>(k) * l / n);
  return f;
}

inline Mat dense_daft(int n, double c1, double c2) {
  Mat a = dense_dft_unitary(n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      a[k][l] *= std::polar(1.0, -kTwoPi * c1 * static_cast<double>(k) * k) *
                 std::polar(1.0, -kTwoPi * c2 * static_cast<double>(l) * l);
  return a;
}

inline Mat mat_adjoint(const Mat& m) {
  const int r = static_cast<int>(m.size()), c = static_cast<int>(m[0].size());
  Mat a(c, cvec(r));
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) a[j][i] = std::conj(m[i][j]);
  return a;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  const int n = static_cast<int>(a.size()), k = static_cast<int>(b.size());
  const int m = static_cast<int>(b[0].size());
  Mat c(n, cvec(m, cplx(0.0, 0.0)));
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < k; ++p)
      for (int j = 0; j < m; ++j) c[i][j] += a[i][p] * b[p][j];
  return c;
}

inline cvec mat_vec(const Mat& a, const cvec& x) {
  cvec y(a.size(), cplx(0.0, 0.0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) y[i] += a[i][j] * x[j];
  return y;
}

// Gaussian elimination with partial pivoting; independent of the library's
// Cholesky route.
inline cvec solve_dense(Mat a, cvec b) {
  const int n = static_cast<int>(a.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) == 0.0) throw std::runtime_error("solve_dense: singular");
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const cplx f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  cvec x(n);
  for (int r = n - 1; r >= 0; --r) {
    cplx acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * x[c];
    x[r] = acc / a[r][r];
  }
  return x;
}

// All length-u patterns with u/2 ones, in the spec's lexicographic order
// ('1' sorts before '0').
inline std::vector<std::vector<uint8_t>> enumerate_balanced(int u) {
  std::vector<uint8_t> p(u, 0);
  std::fill(p.begin(), p.begin() + u / 2, uint8_t{1});
  std::vector<std::vector<uint8_t>> all;
  std::sort(p.begin(), p.end());  // ascending = last pattern in 1-first order
  do {
    all.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](uint8_t x, uint8_t y) { return x > y; });
  });
  return all;
}

inline double log2_binom(int n, int k) {
  return (std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)) /
         std::log(2.0);
}

inline double frob_diff(const Mat& a, const Mat& b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j) acc += std::norm(a[i][j] - b[i][j]);
  return std::sqrt(acc);
}

}  // namespace oracle
