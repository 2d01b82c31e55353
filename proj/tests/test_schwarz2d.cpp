#include <doctest.h>

#include <numbers>
#include <random>

#include "oracles.hpp"
#include "schwarzspec/schwarz2d.hpp"

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

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

SchwarzParams random_params(std::mt19937_64& rng) {
  SchwarzParams p;
  p.k = uniform(rng, 1.0, 60.0);
  p.sigma = uniform(rng, 0.01, 10.0);
  p.delta = uniform(rng, 0.01, 0.5);
  p.L = uniform(rng, 0.1, 2.0);
  return p;
}

constexpr Equation kBoth[] = {Equation::helmholtz, Equation::maxwell};

}  // namespace

TEST_CASE("mode context") {
  const auto p = base_params(0.1);
  const auto m = make_mode(p, 7, 1.0, Equation::helmholtz);
  CHECK(m.k_tilde == 7 * std::numbers::pi);
  CHECK_FALSE(m.evanescent);
  CHECK(make_mode(p, 10, 1.0, Equation::helmholtz).evanescent);
  CHECK(std::abs(m.zeta * m.zeta - Complex{m.k_tilde * m.k_tilde - 900.0, 3.0}) < 1e-11);
  CHECK_THROWS_AS(make_mode(p, 0, 1.0, Equation::helmholtz), std::invalid_argument);
  CHECK_THROWS_AS(make_mode(p, 1, 0.0, Equation::helmholtz), std::invalid_argument);
}

TEST_CASE("mode coefficients") {
  SUBCASE("strongly evanescent modes decouple") {
    const auto p = base_params(1.0);
    double prev_a = 1e300, prev_b = 1e300;
    for (double factor : {1.0, 10.0, 100.0}) {
      ModeContext m = make_mode(p, 1, 1.0, Equation::helmholtz);
      m.k_tilde = factor * p.k;
      m.zeta = zeta_mode(p.k, p.sigma, m.k_tilde);
      const auto c = mode_coefficients(p, m);
      CHECK(std::abs(c.a) < prev_a);
      CHECK(std::abs(c.b) < prev_b);
      prev_a = std::abs(c.a);
      prev_b = std::abs(c.b);
    }
    CHECK(prev_a < 1e-100);
    CHECK(prev_b < 1e-100);
  }
  SUBCASE("cut-off mode") {
    const double k = 3.0 * std::numbers::pi;  // mode 3 sits exactly at k
    SchwarzParams p = base_params(0.5);
    p.k = k;
    const auto m = make_mode(p, 3, 1.0, Equation::helmholtz);
    CHECK(std::abs(m.zeta - std::sqrt(Complex{0.0, k * p.sigma})) < 1e-12);
  }
  SUBCASE("Maxwell without absorption is Helmholtz") {
    const auto p = base_params(0.0);
    for (int j = 1; j <= 20; ++j) {
      const auto ch = mode_coefficients(p, make_mode(p, j, 1.0, Equation::helmholtz));
      const auto cm = mode_coefficients(p, make_mode(p, j, 1.0, Equation::maxwell));
      CHECK(ch.a == cm.a);
      CHECK(ch.b == cm.b);
    }
  }
  SUBCASE("delegates to the 1D formula") {
    const auto p = base_params(0.7);
    const auto m = make_mode(p, 4, 1.0, Equation::maxwell);
    const auto c = mode_coefficients(p, m);
    const auto [a, b] = oracle::raw_coefficients(m.zeta, Complex{0.7, 30.0}, p.delta, p.L);
    CHECK(std::abs(c.a - a) <= 1e-12);
    CHECK(std::abs(c.b - b) <= 1e-12);
  }
}

TEST_CASE("g tilde against g") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 100; ++trial) {
    SchwarzParams p = random_params(rng);
    p.delta = uniform(rng, 0.01, 0.2);
    p.L = uniform(rng, 0.1, 1.0);
    for (Equation eq : kBoth) {
      const double L_hat = uniform(rng, 0.5, 2.0);
      const auto mode = make_mode(p, 1 + static_cast<int>(uniform(rng, 0.0, 30.0)), L_hat, eq);
      const auto gt = g_tilde(p, mode);
      const auto cv = criteria(params_for(p, eq), mode.k_tilde);
      CHECK(gt.prefactor_pm > 0.0);
      CHECK(gt.prefactor_g > 0.0);
      const double scale_pm = gt.prefactor_pm * (std::abs(gt.plus) + std::abs(gt.minus));
      CHECK(std::abs(gt.prefactor_pm * gt.plus - cv.g_plus) <= 1e-10 * scale_pm);
      CHECK(std::abs(gt.prefactor_pm * gt.minus - cv.g_minus) <= 1e-10 * scale_pm);
      CHECK(std::abs(gt.prefactor_g * gt.g - cv.g) <= 1e-10 * std::max(std::abs(cv.g), gt.prefactor_g * std::abs(gt.g)));
    }
  }
  CHECK_THROWS_AS(g_tilde(base_params(0.0), make_mode(base_params(0.0), 1, 1.0, Equation::helmholtz)),
                  std::invalid_argument);
}

TEST_CASE("evanescent modes contract") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const SchwarzParams p = random_params(rng);
    for (Equation eq : kBoth) {
      ModeContext m = make_mode(p, 1, 1.0, eq);
      m.k_tilde = p.k * uniform(rng, 1.0 + 1e-6, 4.0);
      m.zeta = zeta_mode(p.k, p.sigma, m.k_tilde);
      m.evanescent = true;
      const auto c = mode_coefficients(p, m);
      CHECK(r1d_bound(c.a, c.b) < 1.0);
      const auto gt = g_tilde(p, m);
      CHECK(gt.plus > 0.0);
      CHECK(gt.minus > 0.0);
      CHECK(gt.g > 0.0);
    }
  }
  // k_tilde = 2k at the base configuration.
  const auto p = base_params(0.1);
  ModeContext m = make_mode(p, 1, 1.0, Equation::helmholtz);
  m.k_tilde = 60.0;
  m.zeta = zeta_mode(30.0, 0.1, 60.0);
  const auto gt = g_tilde(p, m);
  CHECK(gt.plus > 0.0);
  CHECK(gt.minus > 0.0);
  CHECK(gt.g > 0.0);
}

TEST_CASE("strong absorption contracts every mode") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 20; ++trial) {
    SchwarzParams p = random_params(rng);
    p.sigma = p.k * (1.0 + uniform(rng, 0.0, 1.0));
    for (Equation eq : kBoth) {
      const auto rep = sup_convergence_factor(p, 1.0, eq);
      CHECK(rep.sup_factor < 1.0);
      for (const auto& r : rep.per_mode) {
        const auto gt = g_tilde(p, r.mode);
        CHECK(gt.plus > 0.0);
        CHECK(gt.minus > 0.0);
        CHECK(gt.g > 0.0);
      }
    }
  }
}

TEST_CASE("Maxwell modes above the absorption threshold") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 50; ++trial) {
    SchwarzParams p = random_params(rng);
    p.sigma = p.k * uniform(rng, 0.05, 0.95);
    const double kt_min = std::sqrt(p.k * p.k - p.sigma * p.sigma);
    for (double t : {0.0, 0.1, 0.5, 1.0, 3.0}) {
      ModeContext m = make_mode(p, 1, 1.0, Equation::maxwell);
      m.k_tilde = kt_min + t * p.k;
      m.zeta = zeta_mode(p.k, p.sigma, m.k_tilde);
      m.evanescent = m.k_tilde > p.k;
      const auto gt = g_tilde(p, m);
      CHECK(gt.plus > 0.0);
      CHECK(gt.minus > 0.0);
      CHECK(gt.g > 0.0);
    }
  }
}

TEST_CASE("mode sweep at the base configuration") {
  const auto weak = sup_convergence_factor(base_params(0.1), 1.0, Equation::helmholtz);
  const auto strong = sup_convergence_factor(base_params(1.0), 1.0, Equation::helmholtz);
  CHECK(weak.sup_factor >= 1.0);
  CHECK(weak.argmax_mode.k_tilde <= 30.0 + std::numbers::pi);
  CHECK(strong.sup_factor < 1.0);
  for (const auto* rep : {&weak, &strong}) {
    CHECK(rep->complete);
    CHECK_FALSE(rep->rationale.empty());
    double sup = 0.0;
    for (const auto& r : rep->per_mode) {
      if (r.mode.evanescent) CHECK(r.r1d_mode < 1.0);
      CHECK(r.g_values.has_value());
      sup = std::max(sup, r.r1d_mode);
    }
    CHECK(sup == rep->sup_factor);
    CHECK(rep->truncation == static_cast<int>(rep->per_mode.size()));
  }
}

TEST_CASE("mode sweep truncation") {
  ModeTruncationPolicy tight;
  tight.cap_factor = 0.0;
  tight.extra = 3;
  const auto rep = sup_convergence_factor(base_params(0.1), 1.0, Equation::helmholtz, tight);
  CHECK_FALSE(rep.complete);
  CHECK(rep.truncation == 3);
  CHECK(rep.per_mode.size() == 3);

  const auto flat = sup_convergence_factor(base_params(0.0), 1.0, Equation::helmholtz);
  CHECK_FALSE(flat.per_mode.front().g_values.has_value());
}

TEST_CASE("Maxwell reduction identity") {
  MaxwellReductionSample s;
  s.k = 4.0;
  s.sigma = 0.5;
  s.k_tilde = 2.0;
  s.alpha_j = 1.0;
  s.beta_j = 0.0;
  CHECK(maxwell_reduction_residual(s, 0.3) <= 1e-12);
  s.alpha_j = 0.0;
  CHECK(maxwell_reduction_residual(s, 0.3) == 0.0);

  std::mt19937_64 rng(113);
  std::uniform_int_distribution<int> mode(1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    MaxwellReductionSample r;
    r.k = uniform(rng, 1.0, 10.0);
    r.sigma = uniform(rng, 0.0, 5.0);
    r.k_tilde = mode(rng) * std::numbers::pi;
    r.alpha_j = oracle::random_in_disc(rng);
    r.beta_j = oracle::random_in_disc(rng);
    CHECK(maxwell_reduction_residual(r, uniform(rng, 0.0, 0.25)) <= 1e-10);
  }
  s.k_tilde = 0.0;
  CHECK_THROWS_AS(maxwell_reduction_residual(s, 0.0), std::invalid_argument);
}

TEST_CASE("k-independent bounds") {
  for (Equation eq : kBoth) {
    const auto b20 = beta_bound(1.0, 30.0, 3.0, 20.0, eq);
    const auto b200 = beta_bound(1.0, 30.0, 3.0, 200.0, eq);
    CHECK(std::abs(b20.sup - b200.sup) <= 1e-12);
    CHECK(b20.sup < 1.0);
  }

  const auto sweep = k_scaled_sweep(1.0, 30.0, 3.0, 1.0, {20.0, 60.0, 200.0}, Equation::helmholtz);
  REQUIRE(sweep.size() == 3);
  double prev_gap = 1e300;
  for (const auto& r : sweep) {
    CHECK(r.sweep.complete);
    CHECK(r.sweep.sup_factor <= r.beta.sup + 1e-12);
    const double gap = r.beta.sup - r.sweep.sup_factor;
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK_THROWS_AS(k_scaled_sweep(1.0, 30.0, 3.0, 1.0, {}, Equation::helmholtz), std::invalid_argument);
}
