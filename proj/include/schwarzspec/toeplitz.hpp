#pragma once

#include <optional>
#include <vector>

#include "schwarzspec/numerics.hpp"

namespace schwarzspec {

/// Whether a = 0 or b = 0 is acceptable for an operation.
enum class Degenerate { reject, allow };

/// Parameters of the 2m x 2m block tridiagonal Toeplitz matrix with blocks
///   A0 = [[0, b], [b, 0]],  A1 = [[a, 0], [0, 0]] (above),  A-1 = [[0, 0], [0, a]] (below).
class ToeplitzBlocks {
 public:
  ToeplitzBlocks(Complex a, Complex b, int m, Degenerate degenerate = Degenerate::reject);

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  int m() const { return m_; }
  std::size_t dimension() const { return 2 * static_cast<std::size_t>(m_); }
  bool degenerate() const { return a_ == Complex{} || b_ == Complex{}; }

 private:
  Complex a_;
  Complex b_;
  int m_;
};

DenseMatrix assemble_dense(const ToeplitzBlocks& blocks);

/// Characteristic polynomials p_0 .. p_m built by the three-term recurrence
///   p_m = -B(z) p_{m-1} - A(z) p_{m-2},  A(z) = a^2 z^2,  B(z) = -z^2 + b^2 - a^2.
struct CharPolySequence {
  ToeplitzBlocks blocks;
  std::vector<Polynomial> polys;
  Polynomial A_of_z;
  Polynomial B_of_z;
};

CharPolySequence charpoly(const ToeplitzBlocks& blocks);

/// p_m(z) and p_m'(z) by the recurrence directly on values. `scale` bounds how far
/// rounding in the recurrence can move the value, in units of the unit roundoff
/// (up to a modest factor): each step's term moduli propagated by the moduli of the
/// two growth rates of the recurrence.
/// Components may overflow to infinity for very large m |z|; the root finder
/// uses an internally renormalised variant instead.
Polynomial::Evaluation charpoly_eval(Complex a, Complex b, int m, Complex z);

/// Moduli of the roots u of u^2 - (z^2 - b^2 + a^2) u + a^2 z^2, the growth rates of p_m(z).
double series_growth_bound(Complex a, Complex b, Complex z);

/// |sum_{j <= terms} p_j(z) t^j - N(t,z)/D(t,z)| with N = 1 - a^2 t and
/// D = 1 - (z^2 - b^2 + a^2) t + a^2 z^2 t^2. Requires |t| * series_growth_bound < 0.5.
double generating_check(const ToeplitzBlocks& blocks, Complex t, Complex z, int terms);

/// f(q) = q^{2m+2} - c q^{2m+1} + 2(c-1) q^{m+1} - c q + 1.
Polynomial q_polynomial(Complex c, int m);

struct QPolyDiagnostics {
  Complex c;
  Polynomial f;
  CVector roots;
  double reciprocal_pairing_error = 0.0;
  Complex smallest_root;
};

QPolyDiagnostics q_poly_from_c(Complex c, int m, const RootOptions& options = {});
/// c = a^2 / z^2; throws std::domain_error for z = 0.
QPolyDiagnostics q_poly(const ToeplitzBlocks& blocks, Complex z, const RootOptions& options = {});

struct CurveSample {
  double theta;
  Complex plus;
  Complex minus;
};

struct Outlier {
  Complex value;
  bool admissible;
};

struct LimitSpectrum {
  Complex a;
  Complex b;
  std::vector<CurveSample> curve_samples;
  std::vector<Outlier> outliers;  // both candidates, flagged
  double sup_modulus = 0.0;
};

/// Curve a cos(t) +- sqrt(b^2 - a^2 sin^2(t)) on a uniform grid over [-pi, pi]
/// and the candidates +-sqrt(b^2/2 - a^2), admissible when |a^2| > |b^2/2 - a^2|.
LimitSpectrum limiting_spectrum(Complex a, Complex b, int samples,
                                Degenerate degenerate = Degenerate::reject);

/// Distance from z to the curve (nearest sample, then a local golden-section
/// refinement in theta) or to an admissible outlier, whichever is smaller.
double distance_to_limit(const LimitSpectrum& limit, Complex z);

struct SpectrumOptions {
  RootOptions roots{};
  int curve_samples = 4096;
  int determinant_check_max_m = 8;
};

struct SpectrumReport {
  CVector eigenvalues;
  LimitSpectrum limit;
  std::vector<double> distances;
  double spectral_radius = 0.0;
  double max_distance = 0.0;
  double mean_distance = 0.0;
  /// max |det(lambda I - T)| / scale over the eigenvalues, for m <= determinant_check_max_m.
  std::optional<double> determinant_residual;
};

SpectrumReport spectrum(const ToeplitzBlocks& blocks, const SpectrumOptions& options = {});

}  // namespace schwarzspec
