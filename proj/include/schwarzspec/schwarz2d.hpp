#pragma once

#include <optional>
#include <string>
#include <vector>

#include "schwarzspec/schwarz1d.hpp"

namespace schwarzspec {

enum class Equation { helmholtz, maxwell };

/// Transverse sine mode k_tilde = mode_index * pi / L_hat of the wave-guide.
struct ModeContext {
  int mode_index = 1;
  double k_tilde = 0.0;
  double L_hat = 1.0;
  Equation equation = Equation::helmholtz;
  Complex zeta;
  bool evanescent = false;  // k_tilde > k
};

ModeContext make_mode(const SchwarzParams& params, int mode_index, double L_hat, Equation equation);

/// Params with alpha = ik (Helmholtz) or ik + sigma (Maxwell).
SchwarzParams params_for(const SchwarzParams& params, Equation equation);

SchwarzCoefficients mode_coefficients(const SchwarzParams& params, const ModeContext& mode);

/// Hyperbolic/trigonometric forms of g_pm and g for one mode, with the positive
/// prefactors that turn them back into g_pm and g. Written for gamma = s + i kappa
/// (s = 0 for Helmholtz). Values grow like exp(2x(l+1)) and may overflow.
struct GTilde {
  double plus = 0.0;
  double minus = 0.0;
  double g = 0.0;
  double prefactor_pm = 0.0;  // 4 e^{x(l+1)} / ((kappa+y)^2 + (s+x)^2)
  double prefactor_g = 0.0;   // 4 e^{2x(l+1)} / ((kappa+y)^2 + (s+x)^2)^2
};

GTilde g_tilde(const SchwarzParams& params, const ModeContext& mode);

struct ModeTruncationPolicy {
  double cap_factor = 4.0;  // m_cap = ceil(cap_factor k L_hat / pi) + extra
  int extra = 64;
  int tail_window = 16;
};

struct ModeResult {
  ModeContext mode;
  SchwarzCoefficients coefficients;
  double r1d_mode = 0.0;
  std::optional<CriterionValues> g_values;  // absent when sigma = 0
};

struct ModeSweepReport {
  std::vector<ModeResult> per_mode;
  double sup_factor = 0.0;
  ModeContext argmax_mode;
  int truncation = 0;
  std::string rationale;
  bool complete = false;
};

/// Evaluates r1d_bound(a(k_tilde), b(k_tilde)) for m = 1, 2, ... and stops once the
/// last tail_window modes are evanescent, strictly decreasing and below the running
/// sup, or at m_cap. Ties in the max go to the smaller mode index.
ModeSweepReport sup_convergence_factor(const SchwarzParams& params, double L_hat, Equation equation,
                                       const ModeTruncationPolicy& policy = {});

/// Local solution coefficients of one Maxwell mode,
///   v = -alpha_j (k_tilde/zeta) e^{-zeta x} + beta_j (k_tilde/zeta) e^{zeta x},
///   w =  alpha_j e^{-zeta x} + beta_j e^{zeta x}.
struct MaxwellReductionSample {
  double k = 1.0;
  double sigma = 0.0;
  double k_tilde = 1.0;
  Complex alpha_j;
  Complex beta_j;
  Complex zeta;  // filled from (k, sigma, k_tilde) when left zero
};

/// |(d/dx + ik) w - k_tilde v - (ik / k_tilde) (d/dx + ik + sigma) v| at x_eval,
/// with every derivative taken term by term in closed form.
double maxwell_reduction_residual(const MaxwellReductionSample& sample, double x_eval);

/// sup over beta in [0, beta_max] of the mode factor with k_tilde^2 = beta k^2 under
/// the k-scaled parameters: a 4097-point grid refined by golden-section search.
struct BetaBound {
  double sup = 0.0;
  double argmax_beta = 0.0;
};

BetaBound beta_bound(double sigma0, double L0, double delta0, double k, Equation equation,
                     double beta_max = 16.0, int grid = 4097);

struct KScaledResult {
  double k = 0.0;
  ModeSweepReport sweep;
  BetaBound beta;
};

std::vector<KScaledResult> k_scaled_sweep(double sigma0, double L0, double delta0, double L_hat,
                                          const std::vector<double>& k_list, Equation equation,
                                          const ModeTruncationPolicy& policy = {});

}  // namespace schwarzspec
