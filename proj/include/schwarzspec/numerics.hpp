#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace schwarzspec {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

/// Throws std::invalid_argument naming `what` if z has a NaN or infinite part.
void require_finite(Complex z, const char* what);
void require_finite(double x, const char* what);

/// Polynomial with complex coefficients stored lowest degree first.
///
/// Trailing zero coefficients are trimmed on construction, so the leading
/// coefficient of a non-zero polynomial is never zero. The zero polynomial
/// is represented by a single zero coefficient and reports degree 0.
class Polynomial {
 public:
  Polynomial();
  explicit Polynomial(CVector coeffs);

  /// Monic polynomial with the given roots (repeated entries are repeated roots).
  static Polynomial from_roots(std::span<const Complex> roots);

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == Complex{}; }
  const CVector& coeffs() const { return coeffs_; }
  Complex coeff(int i) const;
  Complex leading() const { return coeffs_.back(); }

  Complex operator()(Complex z) const;
  /// Value, derivative and the magnitude scale sum_i |c_i| |z|^i at z.
  struct Evaluation {
    Complex value;
    Complex derivative;
    double scale;
  };
  Evaluation evaluate(Complex z) const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator*(Complex s) const;

 private:
  void trim();
  CVector coeffs_;
};

// ---------------------------------------------------------------------------
// Simultaneous root finding

struct RootOptions {
  double tol = 1e-12;    // bound on |p(r)| / sum_i |c_i||r|^i for every root
  int max_iter = 1000;
  double angle_seed = 0.4;  // offset of the initial points on the circle
};

/// Raised when the Aberth iteration does not reach `tol` for every root.
class RootFindError : public std::runtime_error {
 public:
  RootFindError(double worst_residual, int iterations);
  double worst_residual() const { return worst_residual_; }
  int iterations() const { return iterations_; }

 private:
  double worst_residual_;
  int iterations_;
};

/// p(z), p'(z) and a non-negative magnitude used to normalise |p(z)|.
using PolyEvaluator = std::function<Polynomial::Evaluation(Complex)>;

/// Aberth-Ehrlich iteration for the `degree` roots of the polynomial sampled
/// by `eval`, started from points on a circle of radius `initial_radius`.
CVector aberth_roots(int degree, const PolyEvaluator& eval, double initial_radius,
                     const RootOptions& options = {});

/// Upper bound on the moduli of the roots of p (Fujiwara).
double fujiwara_bound(const Polynomial& p);

/// All roots of p with multiplicity. Throws std::domain_error for degree 0
/// and RootFindError on non-convergence.
CVector poly_roots(const Polynomial& p, const RootOptions& options = {});

// ---------------------------------------------------------------------------
// Dense linear algebra

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);
  DenseMatrix(std::size_t rows, std::size_t cols, CVector entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Complex operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  std::span<const Complex> entries() const { return data_; }

  CVector apply(std::span<const Complex> x) const;
  DenseMatrix operator*(const DenseMatrix& rhs) const;
  DenseMatrix operator-(const DenseMatrix& rhs) const;
  DenseMatrix operator*(Complex s) const;

  double frobenius_norm() const;
  double inf_norm() const;  // max absolute row sum

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  CVector data_;
};

/// Partial-pivot LU factorisation P A = L U of a square matrix.
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix a);

  Complex determinant() const;
  bool singular() const { return singular_; }
  /// Throws std::domain_error when the matrix is exactly singular.
  CVector solve(std::span<const Complex> rhs) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
};

Complex lu_det(const DenseMatrix& a);
CVector lu_solve(const DenseMatrix& a, std::span<const Complex> rhs);

// ---------------------------------------------------------------------------
// Iterative kernels

using LinearOperator = std::function<CVector(const CVector&)>;

struct PowerOptions {
  int restarts = 4;
  int iters = 20000;
  double tol = 1e-13;
  std::uint64_t seed = 20240517;
};

struct RadiusEstimate {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

/// Dominant-eigenvalue modulus estimate from power iteration.
///
/// The estimate is sqrt|x^H A^2 x| on the normalised iterate, which also
/// settles when the dominant eigenvalues come in a +/- pair. It is a lower
/// bound for non-normal operators whose leading eigenvalues differ in
/// argument by other than pi, and is meant as a cross-check only.
RadiusEstimate power_radius(const LinearOperator& apply, std::size_t n,
                            const PowerOptions& options = {});

struct SolveReport {
  CVector solution;
  int iterations = 0;
  std::vector<double> relative_residual_history;
  bool converged = false;
  bool breakdown = false;
};

/// Full-memory right-preconditioned GMRES: solves A M^{-1} y = b, x = M^{-1} y,
/// from a zero initial guess. An empty `apply_Minv` means no preconditioning.
SolveReport gmres(const LinearOperator& apply_A, const LinearOperator& apply_Minv,
                  const CVector& rhs, double tol, int max_iter);

double norm2(std::span<const Complex> x);

}  // namespace schwarzspec
