#include "schwarzspec/toeplitz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace schwarzspec {

ToeplitzBlocks::ToeplitzBlocks(Complex a, Complex b, int m, Degenerate degenerate)
    : a_(a), b_(b), m_(m) {
  require_finite(a, "a");
  require_finite(b, "b");
  if (m < 1) throw std::invalid_argument("block count m must be >= 1");
  if (degenerate == Degenerate::reject && (a == Complex{} || b == Complex{})) {
    throw std::invalid_argument("a and b must be non-zero (pass Degenerate::allow to override)");
  }
}

DenseMatrix assemble_dense(const ToeplitzBlocks& blocks) {
  const std::size_t n = blocks.dimension();
  DenseMatrix T(n, n);
  const auto m = static_cast<std::size_t>(blocks.m());
  for (std::size_t i = 0; i < m; ++i) {
    T(2 * i, 2 * i + 1) = blocks.b();
    T(2 * i + 1, 2 * i) = blocks.b();
    if (i + 1 < m) {
      T(2 * i, 2 * i + 2) = blocks.a();
      T(2 * i + 3, 2 * i + 1) = blocks.a();
    }
  }
  return T;
}

CharPolySequence charpoly(const ToeplitzBlocks& blocks) {
  const Complex a2 = blocks.a() * blocks.a();
  const Complex b2 = blocks.b() * blocks.b();
  Polynomial A(CVector{0.0, 0.0, a2});
  Polynomial B(CVector{b2 - a2, 0.0, -1.0});
  std::vector<Polynomial> polys;
  polys.reserve(static_cast<std::size_t>(blocks.m()) + 1);
  polys.emplace_back(CVector{1.0});
  polys.emplace_back(CVector{-b2, 0.0, 1.0});
  const Polynomial minus_B = B * Complex{-1.0};
  const Polynomial minus_A = A * Complex{-1.0};
  for (int j = 2; j <= blocks.m(); ++j) {
    const auto& p1 = polys[static_cast<std::size_t>(j - 1)];
    const auto& p2 = polys[static_cast<std::size_t>(j - 2)];
    polys.push_back(minus_B * p1 + minus_A * p2);
  }
  return {blocks, std::move(polys), std::move(A), std::move(B)};
}

namespace {

// Value recurrence with a shared power-of-two exponent so that long recurrences
// neither overflow nor underflow. The returned evaluation must be multiplied by
// 2^exponent to obtain the true values.
struct ScaledEvaluation {
  Polynomial::Evaluation eval;
  int exponent;
};

ScaledEvaluation charpoly_eval_scaled(Complex a, Complex b, int m, Complex z) {
  const Complex a2 = a * a;
  const Complex b2 = b * b;
  const Complex z2 = z * z;
  const Complex coef = z2 - b2 + a2;
  const Complex dcoef = 2.0 * z;
  const Complex a2z2 = a2 * z2;
  const Complex d_a2z2 = 2.0 * a2 * z;
  // Rounding committed at step j reaches p_m through the recurrence's Green's function,
  // bounded by sum_i |u1|^i |u2|^(n-i) where u1, u2 solve u^2 - coef u + a2z2 = 0. The
  // scale accumulates that bound over the terms of every step.
  const Complex disc = std::sqrt(coef * coef - 4.0 * a2z2);
  const double sum_u = std::abs(0.5 * (coef + disc)) + std::abs(0.5 * (coef - disc));
  const double prod_u = std::abs(a2z2);

  Complex p_prev = 1.0, dp_prev = 0.0;
  double s_prev = 1.0;
  Complex p = z2 - b2, dp = 2.0 * z;
  double s = sum_u + std::abs(z2) + std::abs(b2);
  int exponent = 0;
  if (m == 0) return {{p_prev, dp_prev, s_prev}, 0};

  for (int j = 2; j <= m; ++j) {
    const Complex t1 = coef * p;
    const Complex t2 = a2z2 * p_prev;
    const Complex p_next = t1 - t2;
    const Complex dp_next = dcoef * p + coef * dp - d_a2z2 * p_prev - a2z2 * dp_prev;
    const double s_next = std::max(0.0, sum_u * s - prod_u * s_prev) + std::abs(t1) + std::abs(t2);
    p_prev = p;
    dp_prev = dp;
    s_prev = s;
    p = p_next;
    dp = dp_next;
    s = s_next;
    if (s > 1e100 || (s < 1e-100 && s > 0.0)) {
      int e = 0;
      std::frexp(s, &e);
      const double f = std::ldexp(1.0, -e);
      p *= f;
      dp *= f;
      s *= f;
      p_prev *= f;
      dp_prev *= f;
      s_prev *= f;
      exponent += e;
    }
  }
  return {{p, dp, s}, exponent};
}

}  // namespace

Polynomial::Evaluation charpoly_eval(Complex a, Complex b, int m, Complex z) {
  if (m < 0) throw std::invalid_argument("charpoly_eval: m must be >= 0");
  auto [e, exponent] = charpoly_eval_scaled(a, b, m, z);
  if (exponent != 0) {
    const auto up = [exponent](double x) { return std::ldexp(x, exponent); };
    e.value = {up(e.value.real()), up(e.value.imag())};
    e.derivative = {up(e.derivative.real()), up(e.derivative.imag())};
    e.scale = up(e.scale);
  }
  return e;
}

double series_growth_bound(Complex a, Complex b, Complex z) {
  const Complex s = z * z - b * b + a * a;
  const Complex p = a * a * z * z;
  const Complex disc = std::sqrt(s * s - 4.0 * p);
  return std::max(std::abs(0.5 * (s + disc)), std::abs(0.5 * (s - disc)));
}

double generating_check(const ToeplitzBlocks& blocks, Complex t, Complex z, int terms) {
  require_finite(t, "t");
  require_finite(z, "z");
  if (terms < 0) throw std::invalid_argument("generating_check: terms must be >= 0");
  const Complex a = blocks.a();
  const Complex b = blocks.b();
  if (std::abs(t) * series_growth_bound(a, b, z) >= 0.5) {
    throw std::invalid_argument("generating_check: |t| too large for the series to converge safely");
  }
  const Complex a2 = a * a;
  const Complex lin = (z * z - b * b + a2) * t;
  const Complex quad = a2 * z * z * t * t;
  const Complex D = 1.0 - lin + quad;
  if (std::abs(D) <= 1e-14 * (1.0 + std::abs(lin) + std::abs(quad))) {
    throw std::domain_error("generating_check: t is a pole of the generating function");
  }
  const Complex closed = (1.0 - a2 * t) / D;

  // Horner-free accumulation: p_j by recurrence, t^j incrementally.
  Complex sum = 1.0;
  Complex p_prev = 1.0;
  Complex p = z * z - b * b;
  Complex tp = t;
  const Complex coef = z * z - b * b + a2;
  const Complex a2z2 = a2 * z * z;
  for (int j = 1; j <= terms; ++j) {
    sum += p * tp;
    const Complex next = coef * p - a2z2 * p_prev;
    p_prev = p;
    p = next;
    tp *= t;
  }
  return std::abs(sum - closed);
}

Polynomial q_polynomial(Complex c, int m) {
  require_finite(c, "c");
  if (m < 1) throw std::invalid_argument("q_polynomial: m must be >= 1");
  const auto n = static_cast<std::size_t>(2 * m + 3);
  CVector coeffs(n, Complex{});
  coeffs[0] = 1.0;
  coeffs[1] = -c;
  coeffs[static_cast<std::size_t>(m + 1)] += 2.0 * (c - 1.0);
  coeffs[static_cast<std::size_t>(2 * m + 1)] += -c;
  coeffs[static_cast<std::size_t>(2 * m + 2)] = 1.0;
  return Polynomial(std::move(coeffs));
}

QPolyDiagnostics q_poly_from_c(Complex c, int m, const RootOptions& options) {
  QPolyDiagnostics out{c, q_polynomial(c, m), {}, 0.0, {}};
  out.roots = poly_roots(out.f, options);
  double err = 0.0;
  for (const auto& r : out.roots) {
    const Complex inv = 1.0 / r;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& s : out.roots) nearest = std::min(nearest, std::abs(inv - s));
    err = std::max(err, nearest);
  }
  out.reciprocal_pairing_error = err;
  out.smallest_root = *std::min_element(out.roots.begin(), out.roots.end(),
                                        [](Complex x, Complex y) { return std::abs(x) < std::abs(y); });
  return out;
}

QPolyDiagnostics q_poly(const ToeplitzBlocks& blocks, Complex z, const RootOptions& options) {
  require_finite(z, "z");
  if (z == Complex{}) throw std::domain_error("q_poly: z must be non-zero");
  return q_poly_from_c(blocks.a() * blocks.a() / (z * z), blocks.m(), options);
}

// ---------------------------------------------------------------------------

namespace {

std::pair<Complex, Complex> curve_point(Complex a, Complex b, double theta) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex root = std::sqrt(b * b - a * a * (s * s));
  return {a * c + root, a * c - root};
}

double curve_distance(Complex a, Complex b, double theta, Complex z) {
  const auto [p, q] = curve_point(a, b, theta);
  return std::min(std::abs(p - z), std::abs(q - z));
}

}  // namespace

LimitSpectrum limiting_spectrum(Complex a, Complex b, int samples, Degenerate degenerate) {
  require_finite(a, "a");
  require_finite(b, "b");
  if (samples < 2) throw std::invalid_argument("limiting_spectrum: samples must be >= 2");
  if (degenerate == Degenerate::reject && (a == Complex{} || b == Complex{})) {
    throw std::invalid_argument("a and b must be non-zero (pass Degenerate::allow to override)");
  }
  LimitSpectrum out;
  out.a = a;
  out.b = b;
  out.curve_samples.reserve(static_cast<std::size_t>(samples));
  double sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double theta = -std::numbers::pi + 2.0 * std::numbers::pi * i / (samples - 1);
    const auto [p, q] = curve_point(a, b, theta);
    out.curve_samples.push_back({theta, p, q});
    sup = std::max({sup, std::abs(p), std::abs(q)});
  }
  const Complex inner = 0.5 * b * b - a * a;
  const bool admissible = std::abs(a * a) > std::abs(inner);
  const Complex r = std::sqrt(inner);
  out.outliers = {{r, admissible}, {-r, admissible}};
  if (admissible) sup = std::max(sup, std::abs(r));
  out.sup_modulus = sup;
  return out;
}

double distance_to_limit(const LimitSpectrum& limit, Complex z) {
  const auto& cs = limit.curve_samples;
  if (cs.empty()) throw std::invalid_argument("distance_to_limit: empty curve");
  std::size_t best_i = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const double d = std::min(std::abs(cs[i].plus - z), std::abs(cs[i].minus - z));
    if (d < best) {
      best = d;
      best_i = i;
    }
  }

  // Golden-section search between the neighbouring samples.
  if (cs.size() >= 3) {
    double lo = cs[best_i == 0 ? 0 : best_i - 1].theta;
    double hi = cs[std::min(best_i + 1, cs.size() - 1)].theta;
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - phi * (hi - lo);
    double x2 = lo + phi * (hi - lo);
    double f1 = curve_distance(limit.a, limit.b, x1, z);
    double f2 = curve_distance(limit.a, limit.b, x2, z);
    for (int it = 0; it < 60 && hi - lo > 1e-15; ++it) {
      if (f1 < f2) {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - phi * (hi - lo);
        f1 = curve_distance(limit.a, limit.b, x1, z);
      } else {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + phi * (hi - lo);
        f2 = curve_distance(limit.a, limit.b, x2, z);
      }
    }
    best = std::min({best, f1, f2});
  }

  for (const auto& o : limit.outliers) {
    if (o.admissible) best = std::min(best, std::abs(o.value - z));
  }
  return best;
}

SpectrumReport spectrum(const ToeplitzBlocks& blocks, const SpectrumOptions& options) {
  if (blocks.degenerate()) throw std::invalid_argument("spectrum: a and b must be non-zero");
  const Complex a = blocks.a();
  const Complex b = blocks.b();
  const int m = blocks.m();

  SpectrumReport report;
  // Gershgorin: every row of T has absolute sum at most |a| + |b|.
  const double radius = std::abs(a) + std::abs(b);
  report.eigenvalues = aberth_roots(
      2 * m, [&](Complex z) { return charpoly_eval_scaled(a, b, m, z).eval; }, radius,
      options.roots);

  report.limit = limiting_spectrum(a, b, options.curve_samples);
  report.distances.reserve(report.eigenvalues.size());
  double total = 0.0;
  for (const auto& lam : report.eigenvalues) {
    const double d = distance_to_limit(report.limit, lam);
    report.distances.push_back(d);
    report.max_distance = std::max(report.max_distance, d);
    report.spectral_radius = std::max(report.spectral_radius, std::abs(lam));
    total += d;
  }
  report.mean_distance = total / static_cast<double>(report.eigenvalues.size());

  if (m <= options.determinant_check_max_m) {
    const DenseMatrix T = assemble_dense(blocks);
    const std::size_t n = T.rows();
    double worst = 0.0;
    for (const auto& lam : report.eigenvalues) {
      DenseMatrix shifted = DenseMatrix::identity(n) * lam - T;
      const double scale = charpoly_eval(a, b, m, lam).scale;
      worst = std::max(worst, std::abs(lu_det(shifted)) / scale);
    }
    report.determinant_residual = worst;
  }
  return report;
}

}  // namespace schwarzspec
