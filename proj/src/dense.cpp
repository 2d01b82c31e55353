#include "schwarzspec/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace schwarzspec {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, Complex{}) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, CVector entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("DenseMatrix: entry count does not match rows*cols");
  }
  for (const auto& x : data_) require_finite(x, "matrix entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CVector DenseMatrix::apply(std::span<const Complex> x) const {
  if (x.size() != cols_) throw std::invalid_argument("DenseMatrix::apply: size mismatch");
  CVector y(rows_, Complex{});
  for (std::size_t i = 0; i < rows_; ++i) {
    Complex acc{};
    const Complex* row = data_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
    y[i] = acc;
  }
  return y;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("DenseMatrix product: size mismatch");
  DenseMatrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t k = 0; k < cols_; ++k) {
      const Complex aik = (*this)(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += aik * rhs(k, j);
    }
  }
  return out;
}

DenseMatrix DenseMatrix::operator-(const DenseMatrix& rhs) const {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    throw std::invalid_argument("DenseMatrix difference: size mismatch");
  }
  DenseMatrix out = *this;
  for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= rhs.data_[i];
  return out;
}

DenseMatrix DenseMatrix::operator*(Complex s) const {
  DenseMatrix out = *this;
  for (auto& x : out.data_) x *= s;
  return out;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& x : data_) s += std::norm(x);
  return std::sqrt(s);
}

double DenseMatrix::inf_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) row += std::abs((*this)(i, j));
    best = std::max(best, row);
  }
  return best;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)) {
  if (!lu_.square()) throw std::invalid_argument("LU factorisation needs a square matrix");
  const std::size_t n = lu_.rows();
  perm_.resize(n);
  for (std::size_t i = 0; i < n; ++i) perm_[i] = i;

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best == 0.0) {
      singular_ = true;
      continue;
    }
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu_(k, j), lu_(p, j));
      std::swap(perm_[k], perm_[p]);
      sign_ = -sign_;
    }
    const Complex pivot = lu_(k, k);
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = lu_(i, k) / pivot;
      lu_(i, k) = f;
      if (f == Complex{}) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu_(i, j) -= f * lu_(k, j);
    }
  }
}

Complex LuFactorization::determinant() const {
  if (singular_) return Complex{};
  Complex det = static_cast<double>(sign_);
  for (std::size_t i = 0; i < lu_.rows(); ++i) det *= lu_(i, i);
  return det;
}

CVector LuFactorization::solve(std::span<const Complex> rhs) const {
  const std::size_t n = lu_.rows();
  if (rhs.size() != n) throw std::invalid_argument("LU solve: size mismatch");
  if (singular_) throw std::domain_error("LU solve: matrix is singular");
  CVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) x[i] -= lu_(i, j) * x[j];
    x[i] /= lu_(i, i);
  }
  return x;
}

Complex lu_det(const DenseMatrix& a) { return LuFactorization(a).determinant(); }

CVector lu_solve(const DenseMatrix& a, std::span<const Complex> rhs) {
  return LuFactorization(a).solve(rhs);
}

}  // namespace schwarzspec
