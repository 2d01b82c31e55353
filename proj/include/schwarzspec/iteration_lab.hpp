#pragma once

#include <optional>
#include <vector>

#include "schwarzspec/schwarz1d.hpp"
#include "schwarzspec/toeplitz.hpp"

namespace schwarzspec {

/// Interface iteration matrix on [R+(b_1), R-(a_2), R+(b_2), ..., R-(a_N)]; the end
/// data R-(a_1) and R+(b_N) vanish and are not part of the state.
struct IterationMatrix {
  ToeplitzBlocks blocks;
  DenseMatrix dense;
};

/// Assembled subdomain by subdomain from T1 = [[a, b], [0, 0]] acting on the left
/// neighbour and T2 = [[0, 0], [b, a]] on the right neighbour, with the end rows
/// and columns removed.
IterationMatrix build_iteration_matrix(Complex a, Complex b, int N, Degenerate degenerate = Degenerate::reject);

/// Interface data for N subdomains (length 2(N-1)).
class InterfaceVector {
 public:
  InterfaceVector(int N, CVector entries);
  static InterfaceVector random(int N, std::uint64_t seed);

  int subdomains() const { return N_; }
  const CVector& entries() const { return entries_; }
  /// Positions of R+(b_j) (j = 1..N-1) and R-(a_j) (j = 2..N) in the vector.
  static std::size_t index_plus(int j) { return static_cast<std::size_t>(2 * (j - 1)); }
  static std::size_t index_minus(int j) { return static_cast<std::size_t>(2 * j - 3); }

 private:
  int N_;
  CVector entries_;
};

struct IterationHistory {
  std::vector<double> norms;  // ||R^n||_2 for n = 0 .. steps
  double estimated_rate = 0.0;
  int steps = 0;
};

/// Runs R^n = T R^{n-1}. The rate is exp of the least-squares slope of log ||R^n||
/// over the final third of the iterates (0 once the iterate vanishes).
IterationHistory iterate(const IterationMatrix& matrix, const InterfaceVector& r0, int steps);

struct RadiusPoint {
  int N = 0;
  double rho = 0.0;
  double bound = 0.0;  // r1d_bound(a, b)
};

/// rho(T) for each N from the roots of the characteristic polynomial.
std::vector<RadiusPoint> spectral_radius_curve(const SchwarzParams& params, const std::vector<int>& N_list,
                                               std::optional<double> k_tilde = {},
                                               const SpectrumOptions& options = {});

/// sigma = 0, alpha = ik: ||T^{N-1}||_F / max(1, ||T||_inf)^{N-1}.
double nilpotency_check(double k, double delta, double L, int N);

}  // namespace schwarzspec
