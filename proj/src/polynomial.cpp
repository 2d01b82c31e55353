#include "schwarzspec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace schwarzspec {

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw std::invalid_argument(std::string(what) + " must be finite");
}

Polynomial::Polynomial() : coeffs_{Complex{}} {}

Polynomial::Polynomial(CVector coeffs) : coeffs_(std::move(coeffs)) {
  for (const auto& c : coeffs_) require_finite(c, "polynomial coefficient");
  trim();
}

void Polynomial::trim() {
  while (coeffs_.size() > 1 && coeffs_.back() == Complex{}) coeffs_.pop_back();
  if (coeffs_.empty()) coeffs_.push_back(Complex{});
}

Polynomial Polynomial::from_roots(std::span<const Complex> roots) {
  CVector c{Complex{1.0}};
  for (const auto& r : roots) {
    CVector next(c.size() + 1, Complex{});
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  return Polynomial(std::move(c));
}

Complex Polynomial::coeff(int i) const {
  if (i < 0 || i > degree()) return Complex{};
  return coeffs_[static_cast<std::size_t>(i)];
}

Complex Polynomial::operator()(Complex z) const {
  Complex acc = coeffs_.back();
  for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial::Evaluation Polynomial::evaluate(Complex z) const {
  Complex p = coeffs_.back();
  Complex dp{};
  double scale = std::abs(coeffs_.back());
  const double az = std::abs(z);
  for (auto it = coeffs_.rbegin() + 1; it != coeffs_.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
    scale = scale * az + std::abs(*it);
  }
  return {p, dp, scale};
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  CVector c(std::max(coeffs_.size(), rhs.coeffs_.size()), Complex{});
  for (std::size_t i = 0; i < coeffs_.size(); ++i) c[i] += coeffs_[i];
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) c[i] += rhs.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const { return *this + rhs * Complex{-1.0}; }

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  CVector c(coeffs_.size() + rhs.coeffs_.size() - 1, Complex{});
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == Complex{}) continue;
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * rhs.coeffs_[j];
  }
  return Polynomial(std::move(c));
}

Polynomial Polynomial::operator*(Complex s) const {
  CVector c = coeffs_;
  for (auto& x : c) x *= s;
  return Polynomial(std::move(c));
}

// ---------------------------------------------------------------------------

namespace {

std::string root_error_message(double worst, int iterations) {
  std::ostringstream os;
  os << "root finder did not converge after " << iterations
     << " iterations; worst normalised residual " << worst;
  return os.str();
}

double normalised_residual(const Polynomial::Evaluation& e) {
  if (e.scale <= 0.0) return 0.0;
  return std::abs(e.value) / e.scale;
}

}  // namespace

RootFindError::RootFindError(double worst_residual, int iterations)
    : std::runtime_error(root_error_message(worst_residual, iterations)),
      worst_residual_(worst_residual),
      iterations_(iterations) {}

CVector aberth_roots(int degree, const PolyEvaluator& eval, double initial_radius,
                     const RootOptions& options) {
  if (degree < 1) throw std::domain_error("root finding needs degree >= 1");
  if (!(options.tol > 0.0)) throw std::invalid_argument("root tolerance must be positive");
  if (options.max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");

  constexpr double eps = std::numeric_limits<double>::epsilon();
  const auto n = static_cast<std::size_t>(degree);
  const double radius = std::isfinite(initial_radius) && initial_radius > 0.0 ? initial_radius : 1.0;

  CVector z(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n) +
                         options.angle_seed;
    z[k] = std::polar(radius, angle);
  }

  // Noise floor of the normalised residual; below it further updates are meaningless.
  const double floor = 4.0 * eps * static_cast<double>(degree + 1);
  std::vector<char> frozen(n, 0);
  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    bool moved = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      const auto e = eval(z[i]);
      if (normalised_residual(e) <= floor) {
        frozen[i] = 1;
        continue;
      }
      Complex sum{};
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        Complex diff = z[i] - z[j];
        if (diff == Complex{}) diff = Complex{eps * (1.0 + std::abs(z[i])), 0.0};
        sum += 1.0 / diff;
      }
      Complex w;
      if (e.derivative == Complex{}) {
        w = Complex{eps, eps} * (1.0 + std::abs(z[i])) * 1e3;
      } else {
        const Complex ratio = e.value / e.derivative;
        const Complex denom = 1.0 - ratio * sum;
        w = denom == Complex{} ? ratio : ratio / denom;
      }
      z[i] -= w;
      moved = true;
      if (std::abs(w) <= 2.0 * eps * std::abs(z[i])) frozen[i] = 1;
    }
    if (!moved) break;
  }

  double worst = 0.0;
  for (const auto& r : z) worst = std::max(worst, normalised_residual(eval(r)));
  if (!(worst <= options.tol)) throw RootFindError(worst, iter);
  return z;
}

double fujiwara_bound(const Polynomial& p) {
  const int n = p.degree();
  if (n < 1) return 0.0;
  const double lead = std::abs(p.leading());
  double bound = 0.0;
  for (int j = 1; j <= n; ++j) {
    double ratio = std::abs(p.coeff(n - j)) / lead;
    if (j == n) ratio *= 0.5;
    bound = std::max(bound, std::pow(ratio, 1.0 / static_cast<double>(j)));
  }
  return 2.0 * bound;
}

CVector poly_roots(const Polynomial& p, const RootOptions& options) {
  if (p.degree() < 1) throw std::domain_error("poly_roots: polynomial has degree 0");

  // Exact zero roots are split off so the Aberth start circle is never degenerate.
  const auto& c = p.coeffs();
  std::size_t zeros = 0;
  while (c[zeros] == Complex{}) ++zeros;
  CVector roots(zeros, Complex{});
  Polynomial reduced(CVector(c.begin() + static_cast<std::ptrdiff_t>(zeros), c.end()));

  if (reduced.degree() == 0) return roots;
  if (reduced.degree() == 1) {
    roots.push_back(-reduced.coeff(0) / reduced.coeff(1));
    return roots;
  }
  auto rest = aberth_roots(
      reduced.degree(), [&reduced](Complex z) { return reduced.evaluate(z); },
      fujiwara_bound(reduced), options);
  roots.insert(roots.end(), rest.begin(), rest.end());
  return roots;
}

}  // namespace schwarzspec
