#include <doctest.h>

#include "schwarzspec/discrete.hpp"

using namespace schwarzspec;

namespace {

DiscreteProblem problem(double k, int N, BoundaryCase bc, int n = 17) {
  DiscreteProblem p;
  p.k = k;
  p.sigma = 1.0;
  p.n_per_unit = n;
  p.N_sub = N;
  p.bc = bc;
  return p;
}

double relative_error(const CVector& x, const CVector& ref) {
  CVector d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - ref[i];
  return norm2(d) / norm2(ref);
}

}  // namespace

TEST_CASE("boundary case names") {
  CHECK(std::string(to_string(BoundaryCase::wave_guide)) == "wave-guide");
  CHECK(boundary_case_from_string("free-space") == BoundaryCase::free_space);
  CHECK_THROWS_AS(boundary_case_from_string("pml"), std::invalid_argument);
}

TEST_CASE("grid rule") {
  CHECK(pollution_grid_points(10.0) == 17);
  CHECK(pollution_grid_points(20.0) == 28);
  CHECK(pollution_grid_points(100.0) == 95);
  CHECK(pollution_grid_points(0.0) == 17);
}

TEST_CASE("problem validation") {
  auto p = problem(10, 4, BoundaryCase::wave_guide);
  CHECK_NOTHROW(p.validate());
  CHECK(p.h() == doctest::Approx(1.0 / 16));
  CHECK(p.nx() == 65);
  CHECK(p.ny() == 17);
  p.n_per_unit = 8;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = problem(10, 4, BoundaryCase::wave_guide, 9);
  p.overlap_cells = 9;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  CHECK_THROWS_AS(OrasPreconditioner{p}, std::invalid_argument);
}

TEST_CASE("assembled rows") {
  SUBCASE("interior stencil sum") {
    const auto p = problem(7.0, 2, BoundaryCase::wave_guide);
    const auto s = assemble(p);
    const std::size_t r = p.index(5, 5);
    Complex sum{};
    int count = 0;
    for (std::size_t q = s.row_ptr[r]; q < s.row_ptr[r + 1]; ++q, ++count) sum += s.values[q];
    CHECK(count == 5);
    const double h = p.h();
    CHECK(std::abs(sum - Complex{-49.0, 7.0} * (h * h)) < 1e-14);
  }
  SUBCASE("k = 0 structure") {
    auto p = problem(0.0, 2, BoundaryCase::wave_guide);
    p.sigma = 0.0;
    const auto s = assemble(p);
    for (int i = 0; i < p.nx(); ++i) {
      for (int j : {0, p.ny() - 1}) {
        const std::size_t r = p.index(i, j);
        REQUIRE(s.row_ptr[r + 1] - s.row_ptr[r] == 1);
        CHECK(s.cols[s.row_ptr[r]] == r);
        CHECK(s.values[s.row_ptr[r]] == Complex{1.0});
      }
    }
    const std::size_t r = p.index(3, 3);
    CHECK(s.values[s.row_ptr[r]] == Complex{4.0});
    for (const auto& b : s.rhs) CHECK(b == Complex{});
  }
  SUBCASE("free-space corners use the x-direction row") {
    const auto p = problem(5.0, 2, BoundaryCase::free_space);
    const auto s = assemble(p);
    const std::size_t r = p.index(p.nx() - 1, 0);
    REQUIRE(s.row_ptr[r + 1] - s.row_ptr[r] == 2);
    CHECK(s.cols[s.row_ptr[r] + 1] == p.index(p.nx() - 2, 0));
  }
  SUBCASE("left boundary carries the plane-wave trace") {
    const auto p = problem(5.0, 2, BoundaryCase::wave_guide);
    const auto s = assemble(p);
    CHECK(s.rhs[p.index(0, 0)] == Complex{});
    CHECK(std::abs(s.rhs[p.index(0, 4)]) > 0.0);
    CHECK(s.rhs[p.index(3, 4)] == Complex{});
  }
}

TEST_CASE("direct solve") {
  const auto p = problem(20.0, 8, BoundaryCase::wave_guide, pollution_grid_points(20.0));
  const auto s = assemble(p);
  const CVector x = direct_solve(s);
  const CVector Ax = s.apply(x);
  CVector r(Ax.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = Ax[i] - s.rhs[i];
  CHECK(norm2(r) <= 1e-12 * norm2(s.rhs));
}

TEST_CASE("partition of unity") {
  for (int N : {1, 2, 3, 8}) {
    for (int ov : {1, 2, 3, 4}) {
      for (BoundaryCase bc : {BoundaryCase::wave_guide, BoundaryCase::free_space}) {
        auto p = problem(5.0, N, bc, 13);
        p.overlap_cells = ov;
        const OrasPreconditioner M(p);
        CHECK(M.subdomains() == static_cast<std::size_t>(N));
        for (double w : M.partition_of_unity_sum()) CHECK(std::abs(w - 1.0) <= 1e-15);
      }
    }
  }
  auto p = problem(5.0, 2, BoundaryCase::wave_guide, 13);
  const OrasPreconditioner M(p);
  // Neighbours share overlap_cells + 1 grid columns.
  const std::size_t shared = M.restriction(0).size() + M.restriction(1).size() - p.unknowns();
  CHECK(shared == static_cast<std::size_t>((p.overlap_cells + 1) * p.ny()));
}

TEST_CASE("single subdomain preconditioner is the inverse") {
  const auto p = problem(10.0, 1, BoundaryCase::free_space);
  const auto s = assemble(p);
  const OrasPreconditioner M(p);
  const CVector x = M.apply(s.rhs);
  CHECK(relative_error(x, direct_solve(s)) <= 1e-12);
  const auto rep = solve_oras(p, 1e-10, 5);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
}

TEST_CASE("ORAS-GMRES against the direct solve") {
  const auto p = problem(20.0, 8, BoundaryCase::wave_guide, pollution_grid_points(20.0));
  const auto rep = solve_oras(p, 1e-6, 400);
  REQUIRE(rep.converged);
  CHECK(rep.iterations < 60);
  CHECK(rep.relative_residual_history.back() <= 1e-6);
  const auto s = assemble(p);
  CHECK(relative_error(rep.solution, direct_solve(s)) <= 1e-5);

  // Without the preconditioner three times as many iterations are not enough.
  const auto plain = gmres([&](const CVector& x) { return s.apply(x); }, {}, s.rhs, 1e-6, 3 * rep.iterations);
  CHECK_FALSE(plain.converged);
}

TEST_CASE("count scan") {
  ScanOptions opt;
  opt.verify_direct = true;
  const auto table = scan_counts({10.0}, {2, 4}, 1.0, BoundaryCase::free_space, opt);
  REQUIRE(table.rows.size() == 2);
  for (const auto& r : table.rows) {
    CHECK(r.converged);
    CHECK(r.n_per_unit == 17);
    CHECK(r.direct_error >= 0.0);
    CHECK(r.direct_error <= 1e-5);
    CHECK(r.final_residual <= 1e-6);
  }
  const std::string csv = table.to_csv();
  CHECK(csv.rfind("case,k,N,iterations,converged\n", 0) == 0);
  CHECK(csv.find("free-space,10,2,") != std::string::npos);
  CHECK_THROWS_AS(scan_counts({}, {2}, 1.0, BoundaryCase::wave_guide), std::invalid_argument);
}
