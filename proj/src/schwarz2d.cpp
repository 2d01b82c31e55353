#include "schwarzspec/schwarz2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace schwarzspec {

ModeContext make_mode(const SchwarzParams& params, int mode_index, double L_hat, Equation equation) {
  params.validate();
  if (mode_index < 1) throw std::invalid_argument("mode_index must be >= 1");
  if (!(L_hat > 0.0) || !std::isfinite(L_hat)) throw std::invalid_argument("L_hat must be > 0");
  ModeContext m;
  m.mode_index = mode_index;
  m.L_hat = L_hat;
  m.k_tilde = mode_index * std::numbers::pi / L_hat;
  m.equation = equation;
  m.zeta = zeta_mode(params.k, params.sigma, m.k_tilde);
  m.evanescent = m.k_tilde > params.k;
  return m;
}

SchwarzParams params_for(const SchwarzParams& params, Equation equation) {
  SchwarzParams p = params;
  p.alpha = equation == Equation::helmholtz ? AlphaMode::impedance() : AlphaMode::impedance_shifted();
  return p;
}

SchwarzCoefficients mode_coefficients(const SchwarzParams& params, const ModeContext& mode) {
  const SchwarzParams p = params_for(params, mode.equation);
  p.validate();
  return coefficients_from(mode.zeta, p.alpha_value(), p.delta, p.L);
}

GTilde g_tilde(const SchwarzParams& params, const ModeContext& mode) {
  const SchwarzParams p = params_for(params, mode.equation);
  if (!(p.sigma > 0.0)) throw std::invalid_argument("g_tilde requires sigma > 0");
  const ScaledVars sv = scaled_vars(p, mode.k_tilde);
  const double x = sv.x, y = sv.y, l = sv.l, kap = sv.kappa;
  const double s = mode.equation == Equation::maxwell ? sv.s : 0.0;
  const double K = kap * kap + s * s;
  const double R = x * x + y * y;
  const double c1 = kap * y + s * x;
  const double c2 = kap * x - s * y;

  GTilde out;
  const double hyp = ((K + R) * std::sinh(x) + 2.0 * c1 * std::cosh(x)) * std::sinh(l * x);
  const double trig = ((K - R) * std::sin(y) + 2.0 * (s * y - kap * x) * std::cos(y)) * std::sin(l * y);
  out.plus = hyp + trig;
  out.minus = hyp - trig;

  const double xl2 = x * (l + 2.0), yl2 = y * (l + 2.0);
  out.g = (((K + R) * (K + R) + 4.0 * c1 * c1) * std::sinh(xl2) + 4.0 * c1 * (K + R) * std::cosh(xl2)) *
              std::sinh(l * x) +
          (((R - K) * (R - K) - 4.0 * c2 * c2) * std::sin(yl2) + 4.0 * c2 * (R - K) * std::cos(yl2)) *
              std::sin(l * y);

  const double q = (kap + y) * (kap + y) + (s + x) * (s + x);
  out.prefactor_pm = 4.0 * std::exp(x * (l + 1.0)) / q;
  out.prefactor_g = 4.0 * std::exp(2.0 * x * (l + 1.0)) / (q * q);
  return out;
}

ModeSweepReport sup_convergence_factor(const SchwarzParams& params, double L_hat, Equation equation,
                                       const ModeTruncationPolicy& policy) {
  params.validate();
  if (!(L_hat > 0.0)) throw std::invalid_argument("L_hat must be > 0");
  if (policy.tail_window < 1 || policy.extra < 0 || !(policy.cap_factor >= 0.0)) {
    throw std::invalid_argument("invalid mode truncation policy");
  }
  const SchwarzParams p = params_for(params, equation);
  const int cap = static_cast<int>(std::ceil(policy.cap_factor * p.k * L_hat / std::numbers::pi)) + policy.extra;
  const auto tw = static_cast<std::size_t>(policy.tail_window);

  ModeSweepReport report;
  report.per_mode.reserve(static_cast<std::size_t>(cap));

  auto tail_decays = [&]() {
    const auto& r = report.per_mode;
    if (r.size() <= tw) return false;
    const std::size_t start = r.size() - tw;
    double sup_before = 0.0;
    for (std::size_t i = 0; i < start; ++i) sup_before = std::max(sup_before, r[i].r1d_mode);
    for (std::size_t i = start; i < r.size(); ++i) {
      if (!r[i].mode.evanescent) return false;
      if (i > start && !(r[i].r1d_mode < r[i - 1].r1d_mode)) return false;
    }
    return r[start].r1d_mode < sup_before;
  };

  for (int m = 1; m <= cap; ++m) {
    ModeResult res;
    res.mode = make_mode(p, m, L_hat, equation);
    res.coefficients = mode_coefficients(p, res.mode);
    res.r1d_mode = r1d_bound(res.coefficients.a, res.coefficients.b);
    if (p.sigma > 0.0) res.g_values = criteria(p, res.mode.k_tilde);
    if (report.per_mode.empty() || res.r1d_mode > report.sup_factor) {
      report.sup_factor = res.r1d_mode;
      report.argmax_mode = res.mode;
    }
    report.per_mode.push_back(std::move(res));
    if (tail_decays()) {
      report.complete = true;
      report.truncation = m;
      report.rationale = "stopped at mode " + std::to_string(m) + ": last " + std::to_string(tw) +
                         " modes evanescent, strictly decreasing and below the running sup";
      return report;
    }
  }
  report.truncation = cap;
  report.complete = false;
  report.rationale = "mode cap " + std::to_string(cap) + " reached without a decaying evanescent tail";
  return report;
}

double maxwell_reduction_residual(const MaxwellReductionSample& sample, double x_eval) {
  if (!(sample.k > 0.0) || !(sample.k_tilde > 0.0) || !(sample.sigma >= 0.0)) {
    throw std::invalid_argument("maxwell_reduction_residual: need k > 0, k_tilde > 0, sigma >= 0");
  }
  require_finite(x_eval, "x_eval");
  const Complex zeta = sample.zeta == Complex{} ? zeta_mode(sample.k, sample.sigma, sample.k_tilde) : sample.zeta;
  const Complex ik{0.0, sample.k};
  const double kt = sample.k_tilde;
  const Complex em = std::exp(-zeta * x_eval);
  const Complex ep = std::exp(zeta * x_eval);
  const Complex ratio = kt / zeta;

  const Complex v = -sample.alpha_j * ratio * em + sample.beta_j * ratio * ep;
  const Complex w = sample.alpha_j * em + sample.beta_j * ep;
  const Complex dv = -sample.alpha_j * ratio * (-zeta) * em + sample.beta_j * ratio * zeta * ep;
  const Complex dw = sample.alpha_j * (-zeta) * em + sample.beta_j * zeta * ep;

  const Complex lhs = dw + ik * w - kt * v;
  const Complex rhs = (ik / kt) * (dv + (ik + sample.sigma) * v);
  return std::abs(lhs - rhs);
}

namespace {

double beta_factor(const SchwarzParams& p, Equation equation, double beta) {
  const double kt = p.k * std::sqrt(beta);
  const SchwarzParams q = params_for(p, equation);
  const auto c = coefficients_from(zeta_mode(q.k, q.sigma, kt), q.alpha_value(), q.delta, q.L);
  return r1d_bound(c.a, c.b);
}

}  // namespace

BetaBound beta_bound(double sigma0, double L0, double delta0, double k, Equation equation, double beta_max,
                     int grid) {
  if (grid < 3) throw std::invalid_argument("beta_bound: grid must have >= 3 points");
  if (!(beta_max > 0.0)) throw std::invalid_argument("beta_bound: beta_max must be > 0");
  const SchwarzParams p = k_scaled_params(sigma0, L0, delta0, k, 2);
  const double step = beta_max / (grid - 1);

  BetaBound out{-1.0, 0.0};
  int best = 0;
  for (int i = 0; i < grid; ++i) {
    const double beta = step * i;
    const double f = beta_factor(p, equation, beta);
    if (f > out.sup) {
      out.sup = f;
      out.argmax_beta = beta;
      best = i;
    }
  }

  // Golden-section maximisation between the grid neighbours of the best point.
  double lo = step * std::max(best - 1, 0);
  double hi = step * std::min(best + 1, grid - 1);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double f1 = beta_factor(p, equation, x1), f2 = beta_factor(p, equation, x2);
  for (int it = 0; it < 80 && hi - lo > 1e-14 * std::max(1.0, hi); ++it) {
    if (f1 > f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = beta_factor(p, equation, x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = beta_factor(p, equation, x2);
    }
  }
  if (f1 > out.sup) out = {f1, x1};
  if (f2 > out.sup) out = {f2, x2};
  return out;
}

std::vector<KScaledResult> k_scaled_sweep(double sigma0, double L0, double delta0, double L_hat,
                                          const std::vector<double>& k_list, Equation equation,
                                          const ModeTruncationPolicy& policy) {
  if (k_list.empty()) throw std::invalid_argument("k_scaled_sweep: k_list is empty");
  std::vector<KScaledResult> out;
  out.reserve(k_list.size());
  for (double k : k_list) {
    const SchwarzParams p = k_scaled_params(sigma0, L0, delta0, k, 2);
    out.push_back({k, sup_convergence_factor(p, L_hat, equation, policy),
                   beta_bound(sigma0, L0, delta0, k, equation)});
  }
  return out;
}

}  // namespace schwarzspec
