#include "schwarzspec/schwarz1d.hpp"

#include <algorithm>
#include <cmath>

namespace schwarzspec {

void SchwarzParams::validate() const {
  if (!std::isfinite(k) || k <= 0.0) throw std::invalid_argument("k must be > 0");
  if (!std::isfinite(sigma) || sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
  if (!std::isfinite(delta) || delta <= 0.0) throw std::invalid_argument("delta must be > 0");
  if (!std::isfinite(L) || L <= 0.0) throw std::invalid_argument("L must be > 0");
  if (N < 2) throw std::invalid_argument("N must be >= 2");
  if (alpha.kind == AlphaKind::general) require_finite(alpha.value, "alpha");
}

Complex SchwarzParams::alpha_value() const {
  switch (alpha.kind) {
    case AlphaKind::impedance:
      return {0.0, k};
    case AlphaKind::impedance_shifted:
      return {sigma, k};
    case AlphaKind::general:
      return alpha.value;
  }
  return {};
}

Complex zeta_1d(double k, double sigma) {
  if (!(k > 0.0)) throw std::invalid_argument("zeta_1d: k must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("zeta_1d: sigma must be >= 0");
  return std::sqrt(Complex{-k * k, k * sigma});
}

Complex zeta_mode(double k, double sigma, double k_tilde) {
  if (!(k > 0.0)) throw std::invalid_argument("zeta_mode: k must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("zeta_mode: sigma must be >= 0");
  if (!std::isfinite(k_tilde) || k_tilde < 0.0) throw std::invalid_argument("zeta_mode: k_tilde must be >= 0");
  return std::sqrt(Complex{(k_tilde - k) * (k_tilde + k), k * sigma});
}

SchwarzCoefficients coefficients_from(Complex zeta, Complex alpha, double delta, double L) {
  require_finite(zeta, "zeta");
  require_finite(alpha, "alpha");
  if (!(delta > 0.0) || !(L > 0.0)) throw std::invalid_argument("delta and L must be > 0");
  const Complex p = (zeta + alpha) * (zeta + alpha);
  const Complex q = (zeta - alpha) * (zeta - alpha);
  const Complex den = p - q * std::exp(-2.0 * zeta * (2.0 * delta + L));
  const double scale = std::abs(p) + std::abs(q);
  if (std::abs(den) <= 1e-300 * std::max(scale, 1.0) || den == Complex{}) {
    throw SingularConfiguration("local Robin problem is singular (vanishing denominator)");
  }
  const Complex a = (p * std::exp(-zeta * L) - q * std::exp(-zeta * (4.0 * delta + L))) / den;
  const Complex b = -(zeta * zeta - alpha * alpha) *
                    (std::exp(-2.0 * zeta * delta) - std::exp(-zeta * (2.0 * delta + 2.0 * L))) / den;
  if (!std::isfinite(std::abs(a)) || !std::isfinite(std::abs(b))) {
    throw SingularConfiguration("coefficients are not finite");
  }
  return {a, b};
}

SchwarzCoefficients coefficients_1d(const SchwarzParams& params) {
  params.validate();
  return coefficients_from(zeta_1d(params.k, params.sigma), params.alpha_value(), params.delta, params.L);
}

ScaledVars scaled_vars(const SchwarzParams& params, std::optional<double> k_tilde) {
  params.validate();
  ScaledVars sv;
  sv.zeta = k_tilde ? zeta_mode(params.k, params.sigma, *k_tilde) : zeta_1d(params.k, params.sigma);
  const double h = 2.0 * params.delta;
  sv.z = h * sv.zeta;
  sv.x = sv.z.real();
  sv.y = sv.z.imag();
  sv.l = params.L / h;
  sv.gamma = h * params.alpha_value();
  const Complex plus = sv.z + sv.gamma;
  if (plus == Complex{} || std::abs(plus) <= 1e-300) {
    throw SingularConfiguration("v is undefined: z = -gamma");
  }
  sv.v = (sv.z - sv.gamma) / plus;
  sv.w = std::abs(sv.v);
  sv.phi = std::arg(sv.v);
  sv.kappa = h * params.k;
  sv.s = h * params.sigma;
  if (k_tilde) sv.kappa_tilde = h * *k_tilde;
  return sv;
}

namespace {

struct GH {
  Complex G;
  Complex H;
};

// G and H after division by (z + gamma)^2 exp((l+1) z); F_pm = G +- H.
GH g_and_h(const ScaledVars& sv) {
  const Complex z = sv.z;
  const Complex v2 = sv.v * sv.v;
  const double l = sv.l;
  const Complex den = 1.0 - v2 * std::exp(-2.0 * (l + 1.0) * z);
  if (den == Complex{}) throw SingularConfiguration("F/G denominator vanishes");
  const Complex G = (std::exp(-l * z) - v2 * std::exp(-(l + 2.0) * z)) / den;
  const Complex H = sv.v * (std::exp(-z) - std::exp(-(2.0 * l + 1.0) * z)) / den;
  return {G, H};
}

double times_exp(double bracket, double exponent) {
  if (bracket == 0.0) return 0.0;
  return bracket * std::exp(exponent);
}

}  // namespace

Complex F_value(const ScaledVars& sv, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("F_value: sign must be +1 or -1");
  const auto [G, H] = g_and_h(sv);
  return sign > 0 ? G + H : G - H;
}

Complex G_value(const ScaledVars& sv) { return g_and_h(sv).G; }

namespace {

// g_pm and g without their exponential prefactors exp(2x(l+1)) and exp(4x(l+1)).
double g_pm_bracket(const ScaledVars& sv, int sign) {
  const double x = sv.x, y = sv.y, l = sv.l;
  const double w2 = sv.w * sv.w;
  const double hyper = -std::expm1(-2.0 * l * x) * (1.0 - w2 * std::exp(-2.0 * x));
  const double trig = 4.0 * std::sin(l * y) * (sv.v.imag() * std::cos(y) - sv.v.real() * std::sin(y)) *
                      std::exp(-x * (l + 1.0));
  return hyper + sign * trig;
}

double g_bracket(const ScaledVars& sv) {
  const double x = sv.x, y = sv.y, l = sv.l;
  const double re = sv.v.real(), im = sv.v.imag();
  const double w4 = std::pow(sv.w, 4);
  const double hyper = -std::expm1(-2.0 * l * x) * (1.0 - w4 * std::exp(-2.0 * x * (l + 2.0)));
  const double trig = 4.0 * std::sin(l * y) *
                      ((re * re - im * im) * std::sin(y * (l + 2.0)) - 2.0 * re * im * std::cos(y * (l + 2.0))) *
                      std::exp(-2.0 * x * (l + 1.0));
  return hyper + trig;
}

}  // namespace

double abs_sq_from_g(const ScaledVars& sv, int sign) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("abs_sq_from_g: sign must be +1 or -1");
  const double x = sv.x, y = sv.y, l = sv.l, w = sv.w;
  const double einv = std::exp(-x * (l + 1.0));  // 1 / e^{x(l+1)}
  const double angle = (l + 1.0) * y - sv.phi;
  // Numerator and denominator of the fraction divided by e^{2x(l+1)} and e^{4x(l+1)}.
  const double num = (1.0 - w * einv) * (1.0 - w * einv) + 2.0 * w * (1.0 - sign * std::cos(angle)) * einv;
  const double d1 = 1.0 - w * w * einv * einv;
  const double s = std::sin(angle);
  const double den = d1 * d1 + 4.0 * w * w * s * s * einv * einv;
  return 1.0 - num / den * g_pm_bracket(sv, sign);
}

double scaled_x(double k, double sigma, double k_tilde, double delta) {
  const double d = (k_tilde - k) * (k_tilde + k);
  const double r = std::hypot(d, sigma * k);
  double re;
  if (d >= 0.0) {
    re = std::sqrt(0.5 * (r + d));
  } else {
    const double im = std::sqrt(0.5 * (r - d));
    re = im > 0.0 ? 0.5 * sigma * k / im : 0.0;
  }
  return 2.0 * delta * re;
}

double r1d_bound(Complex a, Complex b) {
  double bound = std::max(std::abs(a + b), std::abs(a - b));
  if (std::sqrt(std::abs(a * a - 0.5 * b * b)) < std::abs(a)) bound = std::max(bound, std::abs(a));
  return bound;
}

CriterionValues criteria_from(const ScaledVars& sv) {
  CriterionValues out;
  const double e1 = 2.0 * sv.x * (sv.l + 1.0);
  out.g_plus = times_exp(g_pm_bracket(sv, +1), e1);
  out.g_minus = times_exp(g_pm_bracket(sv, -1), e1);
  out.g = times_exp(g_bracket(sv), 2.0 * e1);
  const auto [G, H] = g_and_h(sv);
  out.F_plus_abs = std::abs(G + H);
  out.F_minus_abs = std::abs(G - H);
  out.G_abs = std::abs(G);
  out.r1d_bound = r1d_bound(G, -H);
  return out;
}

CriterionValues criteria(const SchwarzParams& params, std::optional<double> k_tilde) {
  params.validate();
  if (!(params.sigma > 0.0)) throw std::invalid_argument("criteria require sigma > 0");
  return criteria_from(scaled_vars(params, k_tilde));
}

SchwarzParams k_scaled_params(double sigma0, double L0, double delta0, double k, int N) {
  if (!(sigma0 > 0.0) || !(L0 > 0.0) || !(delta0 > 0.0) || !(k > 0.0)) {
    throw std::invalid_argument("k_scaled_params: all inputs must be positive");
  }
  SchwarzParams p;
  p.k = k;
  p.sigma = sigma0 * k;
  p.L = L0 / k;
  p.delta = delta0 / k;
  p.alpha = AlphaMode::impedance();
  p.N = N;
  p.validate();
  return p;
}

}  // namespace schwarzspec
