#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "schwarzspec/iteration_lab.hpp"

using namespace schwarzspec;

namespace {

SchwarzParams base_params(double sigma) {
  SchwarzParams p;
  p.k = 30;
  p.sigma = sigma;
  p.delta = 0.1;
  p.L = 1;
  return p;
}

}  // namespace

TEST_CASE("iteration matrix structure") {
  const Complex a{0.3, 0.4}, b{-0.2, 0.1};
  const auto m2 = build_iteration_matrix(a, b, 2);
  CHECK(m2.dense == DenseMatrix(2, 2, {0.0, b, b, 0.0}));

  std::mt19937_64 rng(201);
  for (int N = 2; N <= 64; ++N) {
    const Complex ra = oracle::random_in_annulus(rng, 0.1, 1.0), rb = oracle::random_in_annulus(rng, 0.1, 1.0);
    const auto M = build_iteration_matrix(ra, rb, N);
    CHECK(M.dense == assemble_dense(ToeplitzBlocks(ra, rb, N - 1)));
    CHECK(M.blocks.m() == N - 1);
  }
  CHECK_THROWS_AS(build_iteration_matrix(a, b, 1), std::invalid_argument);
  CHECK_THROWS_AS(build_iteration_matrix(a, 0.0, 4), std::invalid_argument);
  CHECK_NOTHROW(build_iteration_matrix(a, 0.0, 4, Degenerate::allow));
}

TEST_CASE("interface vector ordering") {
  CHECK(InterfaceVector::index_plus(1) == 0);
  CHECK(InterfaceVector::index_minus(2) == 1);
  CHECK(InterfaceVector::index_plus(2) == 2);
  CHECK(InterfaceVector::index_minus(5) == 7);
  CHECK_THROWS_AS(InterfaceVector(3, CVector(3)), std::invalid_argument);
  const auto r = InterfaceVector::random(5, 9);
  CHECK(r.entries().size() == 8);
  CHECK(r.entries() == InterfaceVector::random(5, 9).entries());
}

TEST_CASE("stationary iteration") {
  SUBCASE("rate tracks the spectral radius") {
    const auto c = coefficients_1d(base_params(5.0));
    const auto M = build_iteration_matrix(c.a, c.b, 40);
    const double rho = spectrum(M.blocks).spectral_radius;
    const auto h = iterate(M, InterfaceVector::random(40, 3), 120);
    CHECK(h.norms.size() == 121);
    CHECK(h.steps == 120);
    CHECK(h.estimated_rate <= rho + 0.05);
    CHECK(h.estimated_rate <= 1.05 * rho);
    CHECK(h.estimated_rate >= 0.8 * rho);
  }
  SUBCASE("zero start is rejected") {
    const auto M = build_iteration_matrix(0.5, 0.1, 4);
    CHECK_THROWS_AS(iterate(M, InterfaceVector(4, CVector(6)), 10), std::invalid_argument);
    CHECK_THROWS_AS(iterate(M, InterfaceVector::random(4, 1), 0), std::invalid_argument);
  }
  SUBCASE("transparent conditions converge in N steps") {
    for (int N : {3, 8, 16}) {
      const auto c = coefficients_1d(base_params(0.0));
      const auto M = build_iteration_matrix(c.a, c.b, N, Degenerate::allow);
      const auto h = iterate(M, InterfaceVector::random(N, 5), N);
      CHECK(h.norms.back() <= 1e-8 * h.norms.front());
      CHECK(h.estimated_rate == 0.0);
    }
  }
  SUBCASE("rate consistency on convergent configurations") {
    std::mt19937_64 rng(211);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
      SchwarzParams p = base_params(0.5 + 9.5 * u(rng));
      p.k = 5.0 + 45.0 * u(rng);
      const auto c = coefficients_1d(p);
      const auto M = build_iteration_matrix(c.a, c.b, 20);
      const double rho = spectrum(M.blocks).spectral_radius;
      const int steps = std::min(600, static_cast<int>(250.0 / -std::log(rho)));
      const auto h = iterate(M, InterfaceVector::random(20, static_cast<std::uint64_t>(trial)), steps);
      CHECK(h.estimated_rate <= 1.05 * rho);
    }
  }
}

TEST_CASE("spectral radius along N") {
  const std::vector<int> Ns{10, 20, 40, 80, 160};
  const auto weak = spectral_radius_curve(base_params(0.1), Ns);
  const auto strong = spectral_radius_curve(base_params(5.0), Ns);
  REQUIRE(weak.size() == Ns.size());
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    CHECK(weak[i].N == Ns[i]);
    CHECK(weak[i].rho <= weak[i].bound + 1e-6);
    CHECK(strong[i].rho <= strong[i].bound + 1e-6);
    CHECK(strong[i].rho < weak[i].rho);
    if (i > 0) {
      CHECK(weak[i].rho >= weak[i - 1].rho - 1e-9);
      CHECK(strong[i].rho >= strong[i - 1].rho - 1e-9);
    }
  }
  const auto two = spectral_radius_curve(base_params(1.0), {2});
  const auto c = coefficients_1d(base_params(1.0));
  CHECK(two[0].rho == doctest::Approx(std::abs(c.b)).epsilon(1e-12));

  // Per-mode variant uses the mode zeta.
  const auto mode = spectral_radius_curve(base_params(1.0), {10}, 40.0);
  CHECK(mode[0].bound < 1.0);
  CHECK_THROWS_AS(spectral_radius_curve(base_params(1.0), {1}), std::invalid_argument);
}

TEST_CASE("nilpotency without absorption") {
  CHECK(nilpotency_check(1.0, 0.1, 1.0, 3) <= 1e-14);
  for (int N : {3, 8, 16}) CHECK(nilpotency_check(30.0, 0.1, 1.0, N) <= 1e-8);

  const auto c = coefficients_1d(base_params(0.0));
  const auto M = build_iteration_matrix(c.a, c.b, 8, Degenerate::allow);
  const auto power = power_radius([&](const CVector& x) { return M.dense.apply(x); }, M.dense.rows());
  CHECK(power.value <= 1e-7);
}
