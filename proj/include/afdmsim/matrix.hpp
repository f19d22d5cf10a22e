// Small dense complex matrix type plus the few operations the simulator
// needs: products, adjoints, and a Cholesky solve for the LMMSE equalizer.
// Row-major storage; sizes here are a few hundred at most.

#pragma once

#include <cstddef>

#include "afdmsim/types.hpp"

namespace afdmsim {

class CMat {
 public:
  CMat() = default;
  CMat(size_t rows, size_t cols) : rows_(rows), cols_(cols), d_(rows * cols) {}

  static CMat identity(size_t n);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }

  cplx& operator()(size_t i, size_t j) { return d_[i * cols_ + j]; }
  const cplx& operator()(size_t i, size_t j) const { return d_[i * cols_ + j]; }

  cplx* row(size_t i) { return d_.data() + i * cols_; }
  const cplx* row(size_t i) const { return d_.data() + i * cols_; }

  CMat adjoint() const;
  double frobenius_norm() const;
  void add_scaled_identity(double s);

 private:
  size_t rows_ = 0, cols_ = 0;
  cvec d_;
};

CMat matmul(const CMat& a, const CMat& b);
cvec matvec(const CMat& a, const cvec& x);

// Conjugate-transpose products without forming the adjoint:
// gram(h)          = h^H h   (Hermitian, both triangles filled)
// adjoint_times(h) = h^H r
CMat gram(const CMat& h);
cvec adjoint_times(const CMat& h, const cvec& r);

// Solves g x = b for Hermitian positive definite g via an in-place LL^H
// factorization. Throws std::runtime_error when a pivot is not positive
// (singular or indefinite system).
cvec solve_hermitian_pd(CMat g, const cvec& b);

}  // namespace afdmsim
