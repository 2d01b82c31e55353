#pragma once

#include <optional>
#include <stdexcept>

#include "schwarzspec/numerics.hpp"

namespace schwarzspec {

enum class AlphaKind { impedance, impedance_shifted, general };

/// Robin parameter of the transmission conditions: ik, ik + sigma, or a fixed value.
struct AlphaMode {
  AlphaKind kind = AlphaKind::impedance;
  Complex value{};  // used only when kind == general

  static AlphaMode impedance() { return {AlphaKind::impedance, {}}; }
  static AlphaMode impedance_shifted() { return {AlphaKind::impedance_shifted, {}}; }
  static AlphaMode general(Complex alpha) { return {AlphaKind::general, alpha}; }
};

/// 1D model: N subdomains of length L + 2 delta with pitch L, overlap 2 delta.
struct SchwarzParams {
  double k = 1.0;
  double sigma = 0.0;
  double delta = 0.1;
  double L = 1.0;
  AlphaMode alpha{};
  int N = 2;

  /// Throws std::invalid_argument on k <= 0, sigma < 0, delta <= 0, L <= 0,
  /// N < 2 or non-finite values.
  void validate() const;
  Complex alpha_value() const;
};

/// Raised when the local problems are not uniquely solvable (vanishing denominator)
/// or a change of variables is undefined.
class SingularConfiguration : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Principal sqrt(ik sigma - k^2). At sigma = 0 this is +ik.
Complex zeta_1d(double k, double sigma);
/// Principal sqrt(ik sigma + k_tilde^2 - k^2) for a transverse Fourier mode.
Complex zeta_mode(double k, double sigma, double k_tilde);

struct SchwarzCoefficients {
  Complex a;
  Complex b;
};

/// Off-diagonal entries of the interface iteration matrix for given zeta and alpha.
/// Evaluated after dividing numerator and denominator by exp(zeta (2 delta + L)),
/// so large Re(zeta) does not overflow.
SchwarzCoefficients coefficients_from(Complex zeta, Complex alpha, double delta, double L);
SchwarzCoefficients coefficients_1d(const SchwarzParams& params);

/// Dimensionless variables: z = 2 delta zeta, l = L / (2 delta), gamma = 2 delta alpha,
/// v = (z - gamma) / (z + gamma), kappa = 2 delta k, s = 2 delta sigma.
struct ScaledVars {
  Complex zeta;
  Complex z;
  double x = 0.0;
  double y = 0.0;
  double l = 0.0;
  Complex gamma;
  Complex v;
  double w = 0.0;
  double phi = 0.0;
  double kappa = 0.0;
  double s = 0.0;
  std::optional<double> kappa_tilde;
};

/// With k_tilde the mode zeta is used. Throws SingularConfiguration when z = -gamma.
ScaledVars scaled_vars(const SchwarzParams& params, std::optional<double> k_tilde = {});

/// F_plus = a - b, F_minus = a + b (sign = +1 or -1), and G = a, written in z, gamma, l.
Complex F_value(const ScaledVars& sv, int sign);
Complex G_value(const ScaledVars& sv);

/// 1 - frac * g_pm from the polar-v decomposition of |F_pm|^2.
double abs_sq_from_g(const ScaledVars& sv, int sign);

/// Re z for a mode, 2 delta Re sqrt(ik sigma + k_tilde^2 - k^2) written through
/// the modulus of zeta^2 (cancellation-free for k_tilde < k).
double scaled_x(double k, double sigma, double k_tilde, double delta);

struct CriterionValues {
  double g_plus = 0.0;
  double g_minus = 0.0;
  double g = 0.0;
  double F_plus_abs = 0.0;
  double F_minus_abs = 0.0;
  double G_abs = 0.0;
  double r1d_bound = 0.0;
};

/// g_plus, g_minus, g in the Cartesian-v form. They carry factors exp(2x(l+1))
/// and exp(4x(l+1)), so the magnitude can overflow to +-inf; the sign is always
/// meaningful. Requires sigma > 0.
CriterionValues criteria(const SchwarzParams& params, std::optional<double> k_tilde = {});
CriterionValues criteria_from(const ScaledVars& sv);

/// max(|a+b|, |a-b|), and also |a| when |a^2 - b^2/2|^{1/2} < |a|.
double r1d_bound(Complex a, Complex b);

/// sigma = sigma0 k, L = L0 / k, delta = delta0 / k, alpha = ik.
SchwarzParams k_scaled_params(double sigma0, double L0, double delta0, double k, int N);

}  // namespace schwarzspec
