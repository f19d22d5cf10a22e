#include "afdmsim/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace afdmsim {

// GCC routes std::complex products through __muldc3 to recover NaN edge
// cases, which dominates the runtime of dense kernels. The loops below do the
// arithmetic on real/imag parts directly.
namespace {
inline void cmadd(double ar, double ai, double br, double bi, double& sr, double& si) {
  sr += ar * br - ai * bi;
  si += ar * bi + ai * br;
}
// s += conj(a) * b
inline void cmadd_conj(double ar, double ai, double br, double bi, double& sr, double& si) {
  sr += ar * br + ai * bi;
  si += ar * bi - ai * br;
}
}  // namespace

CMat CMat::identity(size_t n) {
  CMat m(n, n);
  for (size_t i = 0; i < n; ++i) m(i, i) = cplx(1.0, 0.0);
  return m;
}

CMat CMat::adjoint() const {
  CMat m(cols_, rows_);
  for (size_t i = 0; i < rows_; ++i)
    for (size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

double CMat::frobenius_norm() const {
  double acc = 0.0;
  for (const auto& v : d_) acc += std::norm(v);
  return std::sqrt(acc);
}

void CMat::add_scaled_identity(double s) {
  if (rows_ != cols_) throw std::invalid_argument("add_scaled_identity: matrix not square");
  for (size_t i = 0; i < rows_; ++i) (*this)(i, i) += s;
}

CMat matmul(const CMat& a, const CMat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  const size_t n = a.rows(), k = a.cols(), m = b.cols();
  CMat c(n, m);
  for (size_t i = 0; i < n; ++i) {
    cplx* ci = c.row(i);
    const cplx* ai = a.row(i);
    for (size_t p = 0; p < k; ++p) {
      const double ar = ai[p].real(), aim = ai[p].imag();
      const cplx* bp = b.row(p);
      for (size_t j = 0; j < m; ++j) {
        double sr = ci[j].real(), si = ci[j].imag();
        cmadd(ar, aim, bp[j].real(), bp[j].imag(), sr, si);
        ci[j] = cplx(sr, si);
      }
    }
  }
  return c;
}

cvec matvec(const CMat& a, const cvec& x) {
  if (a.cols() != x.size()) throw std::invalid_argument("matvec: dimension mismatch");
  cvec y(a.rows());
  for (size_t i = 0; i < a.rows(); ++i) {
    const cplx* ai = a.row(i);
    double sr = 0.0, si = 0.0;
    for (size_t j = 0; j < x.size(); ++j) {
      cmadd(ai[j].real(), ai[j].imag(), x[j].real(), x[j].imag(), sr, si);
    }
    y[i] = cplx(sr, si);
  }
  return y;
}

CMat gram(const CMat& h) {
  const size_t n = h.rows(), m = h.cols();
  CMat g(m, m);
  // g(i,j) = sum_k conj(h(k,i)) h(k,j); fill the upper triangle, mirror the rest.
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = i; j < m; ++j) {
      double sr = 0.0, si = 0.0;
      for (size_t k = 0; k < n; ++k) {
        const cplx& a = h(k, i);
        const cplx& b = h(k, j);
        cmadd_conj(a.real(), a.imag(), b.real(), b.imag(), sr, si);
      }
      g(i, j) = cplx(sr, si);
      if (i != j) g(j, i) = cplx(sr, -si);
    }
  }
  return g;
}

cvec adjoint_times(const CMat& h, const cvec& r) {
  if (h.rows() != r.size()) throw std::invalid_argument("adjoint_times: dimension mismatch");
  cvec y(h.cols(), cplx(0.0, 0.0));
  for (size_t k = 0; k < h.rows(); ++k) {
    const cplx* hk = h.row(k);
    const double rr = r[k].real(), ri = r[k].imag();
    for (size_t j = 0; j < h.cols(); ++j) {
      double sr = y[j].real(), si = y[j].imag();
      cmadd_conj(hk[j].real(), hk[j].imag(), rr, ri, sr, si);
      y[j] = cplx(sr, si);
    }
  }
  return y;
}

cvec solve_hermitian_pd(CMat g, const cvec& b) {
  const size_t n = g.rows();
  if (g.cols() != n || b.size() != n)
    throw std::invalid_argument("solve_hermitian_pd: dimension mismatch");

  // In-place lower Cholesky: g(i,j) for j <= i holds L.
  for (size_t j = 0; j < n; ++j) {
    double diag = g(j, j).real();
    for (size_t k = 0; k < j; ++k) diag -= std::norm(g(j, k));
    if (!(diag > 0.0) || !std::isfinite(diag))
      throw std::runtime_error("solve_hermitian_pd: matrix is not positive definite");
    const double ljj = std::sqrt(diag);
    g(j, j) = cplx(ljj, 0.0);
    const double inv = 1.0 / ljj;
    for (size_t i = j + 1; i < n; ++i) {
      double sr = g(i, j).real(), si = g(i, j).imag();
      const cplx* gi = g.row(i);
      const cplx* gj = g.row(j);
      for (size_t k = 0; k < j; ++k) {
        // s -= g(i,k) * conj(g(j,k))
        sr -= gi[k].real() * gj[k].real() + gi[k].imag() * gj[k].imag();
        si -= gi[k].imag() * gj[k].real() - gi[k].real() * gj[k].imag();
      }
      g(i, j) = cplx(sr * inv, si * inv);
    }
  }

  // Forward solve L y = b.
  cvec y(b);
  for (size_t i = 0; i < n; ++i) {
    double sr = y[i].real(), si = y[i].imag();
    const cplx* gi = g.row(i);
    for (size_t k = 0; k < i; ++k) {
      sr -= gi[k].real() * y[k].real() - gi[k].imag() * y[k].imag();
      si -= gi[k].real() * y[k].imag() + gi[k].imag() * y[k].real();
    }
    const double inv = 1.0 / g(i, i).real();
    y[i] = cplx(sr * inv, si * inv);
  }

  // Backward solve L^H x = y.
  for (size_t ii = n; ii-- > 0;) {
    double sr = y[ii].real(), si = y[ii].imag();
    for (size_t k = ii + 1; k < n; ++k) {
      // s -= conj(L(k,ii)) * x(k)
      const cplx& l = g(k, ii);
      sr -= l.real() * y[k].real() + l.imag() * y[k].imag();
      si -= l.real() * y[k].imag() - l.imag() * y[k].real();
    }
    const double inv = 1.0 / g(ii, ii).real();
    y[ii] = cplx(sr * inv, si * inv);
  }
  return y;
}

}  // namespace afdmsim
