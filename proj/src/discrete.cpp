#include "schwarzspec/discrete.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace schwarzspec {

const char* to_string(BoundaryCase c) { return c == BoundaryCase::wave_guide ? "wave-guide" : "free-space"; }

BoundaryCase boundary_case_from_string(const std::string& s) {
  if (s == "wave-guide" || s == "wave_guide" || s == "WaveGuide") return BoundaryCase::wave_guide;
  if (s == "free-space" || s == "free_space" || s == "FreeSpace") return BoundaryCase::free_space;
  throw std::invalid_argument("unknown boundary case '" + s + "' (expected wave-guide or free-space)");
}

void DiscreteProblem::validate() const {
  if (!std::isfinite(k) || k < 0.0) throw std::invalid_argument("k must be >= 0");
  if (!std::isfinite(sigma) || sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  if (n_per_unit < 9) throw std::invalid_argument("n_per_unit must be >= 9");
  if (N_sub < 1) throw std::invalid_argument("N_sub must be >= 1");
  if (overlap_cells < 1) throw std::invalid_argument("overlap_cells must be >= 1");
  if (overlap_cells > n_per_unit - 1) {
    throw std::invalid_argument("overlap_cells exceeds the subdomain width");
  }
}

int pollution_grid_points(double k, double c) {
  if (!(k >= 0.0) || !(c > 0.0)) throw std::invalid_argument("pollution_grid_points: need k >= 0, c > 0");
  return std::max(17, static_cast<int>(std::lround(c * std::pow(k, 0.75))));
}

CVector SparseSystem::apply(const CVector& x) const {
  if (x.size() != n) throw std::invalid_argument("SparseSystem::apply: size mismatch");
  CVector y(n);
  for (std::size_t r = 0; r < n; ++r) {
    Complex acc{};
    for (std::size_t q = row_ptr[r]; q < row_ptr[r + 1]; ++q) acc += values[q] * x[cols[q]];
    y[r] = acc;
  }
  return y;
}

namespace {

using SpMat = Eigen::SparseMatrix<Complex>;
using SpSolver = Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>;

struct Entry {
  int i;
  int j;
  Complex v;
};

struct Row {
  std::array<Entry, 5> e{};
  int count = 0;
  Complex rhs{};
  void add(int i, int j, Complex v) { e[static_cast<std::size_t>(count++)] = {i, j, v}; }
};

// Stencil row for grid node (i, j). Columns `left_art` / `right_art` (or -1) are
// artificial interfaces that receive Robin rows instead of the global row.
Row stencil_row(const DiscreteProblem& p, int i, int j, int left_art, int right_art) {
  const int nx = p.nx(), ny = p.ny();
  const double h = p.h();
  const Complex robin{1.0, p.k * h};
  Row row;
  const bool wg = p.bc == BoundaryCase::wave_guide;
  if (wg && (j == 0 || j == ny - 1)) {
    row.add(i, j, 1.0);
    return row;
  }
  if (i == left_art) {
    row.add(i, j, robin);
    row.add(i + 1, j, -1.0);
    return row;
  }
  if (i == right_art) {
    row.add(i, j, robin);
    row.add(i - 1, j, -1.0);
    return row;
  }
  if (i == 0) {
    const Complex zeta = std::sqrt(Complex{-p.k * p.k, p.k * p.sigma});
    row.add(0, j, robin);
    row.add(1, j, -1.0);
    row.rhs = h * (zeta + Complex{0.0, p.k});
    return row;
  }
  if (i == nx - 1) {
    row.add(i, j, robin);
    row.add(i - 1, j, -1.0);
    return row;
  }
  if (j == 0) {
    row.add(i, 0, robin);
    row.add(i, 1, -1.0);
    return row;
  }
  if (j == ny - 1) {
    row.add(i, j, robin);
    row.add(i, j - 1, -1.0);
    return row;
  }
  row.add(i, j, 4.0 + Complex{-p.k * p.k, p.k * p.sigma} * (h * h));
  row.add(i - 1, j, -1.0);
  row.add(i + 1, j, -1.0);
  row.add(i, j - 1, -1.0);
  row.add(i, j + 1, -1.0);
  return row;
}

SpMat to_eigen(const SparseSystem& s) {
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(s.values.size());
  for (std::size_t r = 0; r < s.n; ++r) {
    for (std::size_t q = s.row_ptr[r]; q < s.row_ptr[r + 1]; ++q) {
      t.emplace_back(static_cast<int>(r), static_cast<int>(s.cols[q]), s.values[q]);
    }
  }
  SpMat m(static_cast<Eigen::Index>(s.n), static_cast<Eigen::Index>(s.n));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

void factorize(SpSolver& solver, const SpMat& m) {
  solver.analyzePattern(m);
  solver.factorize(m);
  if (solver.info() != Eigen::Success) throw std::runtime_error("sparse LU factorisation failed");
}

}  // namespace

SparseSystem assemble(const DiscreteProblem& problem) {
  problem.validate();
  const int nx = problem.nx(), ny = problem.ny();
  SparseSystem s;
  s.n = problem.unknowns();
  s.row_ptr.reserve(s.n + 1);
  s.row_ptr.push_back(0);
  s.cols.reserve(5 * s.n);
  s.values.reserve(5 * s.n);
  s.rhs.assign(s.n, Complex{});
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const Row row = stencil_row(problem, i, j, -1, -1);
      for (int q = 0; q < row.count; ++q) {
        const auto& e = row.e[static_cast<std::size_t>(q)];
        s.cols.push_back(problem.index(e.i, e.j));
        s.values.push_back(e.v);
      }
      s.rhs[problem.index(i, j)] = row.rhs;
      s.row_ptr.push_back(s.cols.size());
    }
  }
  return s;
}

CVector direct_solve(const SparseSystem& system) {
  const SpMat m = to_eigen(system);
  SpSolver solver;
  factorize(solver, m);
  Eigen::VectorXcd b(static_cast<Eigen::Index>(system.n));
  for (std::size_t i = 0; i < system.n; ++i) b[static_cast<Eigen::Index>(i)] = system.rhs[i];
  const Eigen::VectorXcd x = solver.solve(b);
  return CVector(x.data(), x.data() + x.size());
}

// ---------------------------------------------------------------------------

struct OrasPreconditioner::Impl {
  std::size_t n = 0;
  std::vector<std::vector<std::size_t>> restrictions;
  std::vector<std::vector<double>> weights;
  std::vector<std::unique_ptr<SpSolver>> solvers;
};

OrasPreconditioner::OrasPreconditioner(const DiscreteProblem& problem) : impl_(std::make_unique<Impl>()) {
  problem.validate();
  const int nx = problem.nx(), ny = problem.ny(), cells = problem.n_per_unit - 1;
  const int ov = problem.overlap_cells;
  impl_->n = problem.unknowns();

  std::vector<std::pair<int, int>> spans;
  std::vector<int> multiplicity(static_cast<std::size_t>(nx), 0);
  for (int s = 0; s < problem.N_sub; ++s) {
    const int lo = std::max(0, s * cells - ov / 2);
    const int hi = std::min(nx - 1, (s + 1) * cells + (ov + 1) / 2);
    spans.emplace_back(lo, hi);
    for (int i = lo; i <= hi; ++i) ++multiplicity[static_cast<std::size_t>(i)];
  }

  for (const auto& [lo, hi] : spans) {
    const int width = hi - lo + 1;
    const int left_art = lo > 0 ? lo : -1;
    const int right_art = hi < nx - 1 ? hi : -1;
    std::vector<std::size_t> R;
    std::vector<double> D;
    R.reserve(static_cast<std::size_t>(width * ny));
    D.reserve(R.capacity());
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(5 * R.capacity());
    for (int j = 0; j < ny; ++j) {
      for (int i = lo; i <= hi; ++i) {
        const int local = j * width + (i - lo);
        R.push_back(problem.index(i, j));
        D.push_back(1.0 / multiplicity[static_cast<std::size_t>(i)]);
        const Row row = stencil_row(problem, i, j, left_art, right_art);
        for (int q = 0; q < row.count; ++q) {
          const auto& e = row.e[static_cast<std::size_t>(q)];
          t.emplace_back(local, e.j * width + (e.i - lo), e.v);
        }
      }
    }
    SpMat m(width * ny, width * ny);
    m.setFromTriplets(t.begin(), t.end());
    m.makeCompressed();
    auto solver = std::make_unique<SpSolver>();
    factorize(*solver, m);
    impl_->restrictions.push_back(std::move(R));
    impl_->weights.push_back(std::move(D));
    impl_->solvers.push_back(std::move(solver));
  }
}

OrasPreconditioner::~OrasPreconditioner() = default;
OrasPreconditioner::OrasPreconditioner(OrasPreconditioner&&) noexcept = default;
OrasPreconditioner& OrasPreconditioner::operator=(OrasPreconditioner&&) noexcept = default;

CVector OrasPreconditioner::apply(const CVector& r) const {
  if (r.size() != impl_->n) throw std::invalid_argument("OrasPreconditioner::apply: size mismatch");
  CVector y(impl_->n, Complex{});
  for (std::size_t s = 0; s < impl_->solvers.size(); ++s) {
    const auto& R = impl_->restrictions[s];
    const auto& D = impl_->weights[s];
    Eigen::VectorXcd local(static_cast<Eigen::Index>(R.size()));
    for (std::size_t q = 0; q < R.size(); ++q) local[static_cast<Eigen::Index>(q)] = r[R[q]];
    const Eigen::VectorXcd x = impl_->solvers[s]->solve(local);
    for (std::size_t q = 0; q < R.size(); ++q) y[R[q]] += D[q] * x[static_cast<Eigen::Index>(q)];
  }
  return y;
}

std::size_t OrasPreconditioner::subdomains() const { return impl_->solvers.size(); }

const std::vector<std::size_t>& OrasPreconditioner::restriction(std::size_t i) const {
  return impl_->restrictions.at(i);
}

const std::vector<double>& OrasPreconditioner::weights(std::size_t i) const { return impl_->weights.at(i); }

std::vector<double> OrasPreconditioner::partition_of_unity_sum() const {
  std::vector<double> sum(impl_->n, 0.0);
  for (std::size_t s = 0; s < impl_->restrictions.size(); ++s) {
    const auto& R = impl_->restrictions[s];
    for (std::size_t q = 0; q < R.size(); ++q) sum[R[q]] += impl_->weights[s][q];
  }
  return sum;
}

// ---------------------------------------------------------------------------

std::string CountTable::to_csv() const {
  std::ostringstream os;
  os << "case,k,N,iterations,converged\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.17g", r.k);
    os << to_string(r.bc) << ',' << buf << ',' << r.N << ',' << r.iterations << ',' << (r.converged ? 1 : 0)
       << '\n';
  }
  return os.str();
}

SolveReport solve_oras(const DiscreteProblem& problem, double tol, int max_iter) {
  const SparseSystem system = assemble(problem);
  const OrasPreconditioner M(problem);
  return gmres([&](const CVector& x) { return system.apply(x); }, [&](const CVector& x) { return M.apply(x); },
               system.rhs, tol, max_iter);
}

CountTable scan_counts(const std::vector<double>& k_list, const std::vector<int>& N_list, double sigma,
                       BoundaryCase bc, const ScanOptions& options) {
  if (k_list.empty() || N_list.empty()) throw std::invalid_argument("scan_counts: lists must be non-empty");
  CountTable table;
  for (double k : k_list) {
    for (int N : N_list) {
      DiscreteProblem p;
      p.k = k;
      p.sigma = sigma;
      p.n_per_unit = pollution_grid_points(k, options.grid_constant);
      p.N_sub = N;
      p.bc = bc;
      p.overlap_cells = options.overlap_cells;
      const SparseSystem system = assemble(p);
      const OrasPreconditioner M(p);
      const SolveReport rep =
          gmres([&](const CVector& x) { return system.apply(x); }, [&](const CVector& x) { return M.apply(x); },
                system.rhs, options.tol, options.max_iter);
      CountRow row;
      row.bc = bc;
      row.k = k;
      row.N = N;
      row.iterations = rep.iterations;
      row.converged = rep.converged;
      row.n_per_unit = p.n_per_unit;
      row.final_residual = rep.relative_residual_history.empty() ? 0.0 : rep.relative_residual_history.back();
      if (options.verify_direct) {
        const CVector xd = direct_solve(system);
        CVector diff(xd.size());
        for (std::size_t i = 0; i < xd.size(); ++i) diff[i] = rep.solution[i] - xd[i];
        row.direct_error = norm2(diff) / norm2(xd);
      }
      table.rows.push_back(row);
    }
  }
  return table;
}

}  // namespace schwarzspec
