#pragma once

#include <memory>
#include <string>
#include <vector>

#include "schwarzspec/numerics.hpp"

namespace schwarzspec {

enum class BoundaryCase { wave_guide, free_space };

const char* to_string(BoundaryCase c);
BoundaryCase boundary_case_from_string(const std::string& s);

/// Absorptive Helmholtz on (0, N_sub) x (0, 1) with a 5-point finite-difference
/// stencil, h = 1 / (n_per_unit - 1). Strips of unit width are the subdomains.
struct DiscreteProblem {
  double k = 10.0;
  double sigma = 1.0;
  int n_per_unit = 17;
  int N_sub = 4;
  BoundaryCase bc = BoundaryCase::wave_guide;
  int overlap_cells = 2;

  void validate() const;
  double h() const { return 1.0 / (n_per_unit - 1); }
  int nx() const { return N_sub * (n_per_unit - 1) + 1; }
  int ny() const { return n_per_unit; }
  std::size_t unknowns() const { return static_cast<std::size_t>(nx()) * static_cast<std::size_t>(ny()); }
  std::size_t index(int i, int j) const {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx()) + static_cast<std::size_t>(i);
  }
};

/// Grid points per unit length, max(17, round(c k^{3/4})).
int pollution_grid_points(double k, double c = 3.0);

/// Compressed-row complex matrix with its right-hand side.
struct SparseSystem {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> cols;
  CVector values;
  CVector rhs;

  CVector apply(const CVector& x) const;
};

/// Interior rows are scaled by h^2: 4 + (ik sigma - k^2) h^2 on the diagonal and -1
/// for the four neighbours. Impedance rows use one-sided differences scaled by h,
/// (1 + ikh) u_b - u_inner. Wave-guide: u = 0 on y = 0, 1 (corners included),
/// impedance on x = 0, N_sub. Free space: impedance everywhere, corners take the
/// x-direction row. The left boundary carries the trace of the plane wave e^{-zeta x}.
SparseSystem assemble(const DiscreteProblem& problem);

/// Sparse LU solve of the assembled system.
CVector direct_solve(const SparseSystem& system);

/// One-level optimized restricted additive Schwarz, M^{-1} = sum_i R_i^T D_i A_i^{-1} R_i.
/// Subdomain i covers grid columns [i(n-1) - floor(o/2), (i+1)(n-1) + ceil(o/2)]
/// clipped to the domain, so neighbours share o cells. A_i is the global operator
/// restricted to the strip with Robin rows (-+d/dx + ik) on artificial interfaces.
class OrasPreconditioner {
 public:
  explicit OrasPreconditioner(const DiscreteProblem& problem);
  ~OrasPreconditioner();
  OrasPreconditioner(OrasPreconditioner&&) noexcept;
  OrasPreconditioner& operator=(OrasPreconditioner&&) noexcept;

  CVector apply(const CVector& r) const;

  std::size_t subdomains() const;
  /// Global indices owned by subdomain i.
  const std::vector<std::size_t>& restriction(std::size_t i) const;
  /// Partition-of-unity weights of subdomain i, aligned with restriction(i).
  const std::vector<double>& weights(std::size_t i) const;
  /// sum_i R_i^T D_i R_i applied to the all-ones vector.
  std::vector<double> partition_of_unity_sum() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct CountRow {
  BoundaryCase bc = BoundaryCase::wave_guide;
  double k = 0.0;
  int N = 0;
  int iterations = 0;
  bool converged = false;
  int n_per_unit = 0;
  double final_residual = 0.0;
  double direct_error = -1.0;  // relative error against the direct solve, -1 if not computed
};

struct CountTable {
  std::vector<CountRow> rows;
  /// CSV with header case,k,N,iterations,converged.
  std::string to_csv() const;
};

struct ScanOptions {
  double tol = 1e-6;
  int max_iter = 400;
  double grid_constant = 3.0;
  int overlap_cells = 2;
  bool verify_direct = false;
};

/// Right-preconditioned GMRES with ORAS on one problem.
SolveReport solve_oras(const DiscreteProblem& problem, double tol, int max_iter);

CountTable scan_counts(const std::vector<double>& k_list, const std::vector<int>& N_list, double sigma,
                       BoundaryCase bc, const ScanOptions& options = {});

}  // namespace schwarzspec
