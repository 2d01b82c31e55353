#include "schwarzspec/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace schwarzspec {

double norm2(std::span<const Complex> x) {
  // Scaled accumulation so long vectors of huge or tiny entries do not overflow.
  double scale = 0.0;
  double ssq = 1.0;
  for (const auto& v : x) {
    for (double c : {v.real(), v.imag()}) {
      if (c == 0.0) continue;
      const double a = std::abs(c);
      if (scale < a) {
        ssq = 1.0 + ssq * (scale / a) * (scale / a);
        scale = a;
      } else {
        ssq += (a / scale) * (a / scale);
      }
    }
  }
  return scale * std::sqrt(ssq);
}

namespace {

Complex dot(const CVector& x, const CVector& y) {  // x^H y
  Complex s{};
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

void scale_in_place(CVector& x, double s) {
  for (auto& v : x) v *= s;
}

}  // namespace

RadiusEstimate power_radius(const LinearOperator& apply, std::size_t n, const PowerOptions& options) {
  if (n == 0) throw std::invalid_argument("power_radius: n must be >= 1");
  if (options.restarts < 1) throw std::invalid_argument("power_radius: restarts must be >= 1");
  if (options.iters < 1) throw std::invalid_argument("power_radius: iters must be >= 1");

  RadiusEstimate best{0.0, true, 0};
  bool first = true;
  for (int r = 0; r < options.restarts; ++r) {
    std::mt19937_64 rng(options.seed + static_cast<std::uint64_t>(r));
    std::normal_distribution<double> gauss;
    CVector x(n);
    for (auto& v : x) v = {gauss(rng), gauss(rng)};
    scale_in_place(x, 1.0 / norm2(x));

    CVector y = apply(x);
    double ny = norm2(y);
    double est = 0.0;
    double prev = -1.0;
    int stable = 0;
    bool converged = false;
    int it = 0;
    for (; it < options.iters; ++it) {
      if (ny == 0.0) {
        est = 0.0;
        converged = true;
        break;
      }
      CVector next = y;
      scale_in_place(next, 1.0 / ny);
      CVector ynext = apply(next);
      // x^H A^2 x = |Ax| * x^H A(next)
      est = std::sqrt(ny * std::abs(dot(x, ynext)));
      if (prev >= 0.0 && std::abs(est - prev) <= options.tol * std::max(est, 1e-300)) {
        if (++stable >= 3) {
          converged = true;
          break;
        }
      } else {
        stable = 0;
      }
      prev = est;
      x = std::move(next);
      y = std::move(ynext);
      ny = norm2(y);
    }
    if (first || est > best.value) {
      best.value = est;
      best.iterations = it;
    }
    best.converged = first ? converged : (best.converged && converged);
    first = false;
  }
  return best;
}

SolveReport gmres(const LinearOperator& apply_A, const LinearOperator& apply_Minv, const CVector& rhs,
                  double tol, int max_iter) {
  if (!(tol > 0.0)) throw std::invalid_argument("gmres: tol must be positive");
  if (max_iter < 1) throw std::invalid_argument("gmres: max_iter must be >= 1");
  for (const auto& v : rhs) require_finite(v, "gmres right-hand side");

  const std::size_t n = rhs.size();
  auto precond = [&](const CVector& v) { return apply_Minv ? apply_Minv(v) : v; };

  SolveReport report;
  report.solution.assign(n, Complex{});
  const double beta = norm2(rhs);
  if (beta == 0.0) {
    report.converged = true;
    report.relative_residual_history.push_back(0.0);
    return report;
  }

  const auto m = static_cast<std::size_t>(max_iter);
  std::vector<CVector> V;
  V.reserve(std::min(m + 1, n + 1));
  V.push_back(rhs);
  scale_in_place(V[0], 1.0 / beta);

  std::vector<CVector> H;  // column j holds h_{0..j+1, j}, rotated into R
  std::vector<double> cs;
  std::vector<Complex> sn;
  std::vector<Complex> g{Complex{beta}};

  std::size_t j = 0;
  for (; j < m; ++j) {
    CVector w = apply_A(precond(V[j]));
    if (w.size() != n) throw std::invalid_argument("gmres: operator changed vector length");
    CVector h(j + 2, Complex{});
    for (std::size_t i = 0; i <= j; ++i) {
      h[i] = dot(V[i], w);
      for (std::size_t q = 0; q < n; ++q) w[q] -= h[i] * V[i][q];
    }
    const double hnext = norm2(w);
    h[j + 1] = hnext;

    for (std::size_t i = 0; i < j; ++i) {
      const Complex t = cs[i] * h[i] + sn[i] * h[i + 1];
      h[i + 1] = -std::conj(sn[i]) * h[i] + cs[i] * h[i + 1];
      h[i] = t;
    }
    const Complex a = h[j];
    const double rho = std::hypot(std::abs(a), hnext);
    double c;
    Complex s;
    if (std::abs(a) == 0.0) {
      c = 0.0;
      s = 1.0;
      h[j] = hnext;
    } else {
      const Complex phase = a / std::abs(a);
      c = std::abs(a) / rho;
      s = phase * hnext / rho;
      h[j] = phase * rho;
    }
    h[j + 1] = 0.0;
    const bool singular_diag = h[j] == Complex{};
    cs.push_back(c);
    sn.push_back(s);
    g.push_back(-std::conj(s) * g[j]);
    g[j] = c * g[j];
    H.push_back(std::move(h));

    const double rel = std::abs(g[j + 1]) / beta;
    report.relative_residual_history.push_back(rel);
    report.iterations = static_cast<int>(j + 1);
    if (rel <= tol) {
      report.converged = true;
      ++j;
      break;
    }
    if (hnext <= 1e-14 * beta || singular_diag) {
      report.breakdown = true;
      ++j;
      break;
    }
    scale_in_place(w, 1.0 / hnext);
    V.push_back(std::move(w));
  }

  // Back substitution on the rotated Hessenberg system, then x = M^{-1} V y.
  const std::size_t k = j;
  std::vector<Complex> y(k);
  for (std::size_t i = k; i-- > 0;) {
    Complex acc = g[i];
    for (std::size_t q = i + 1; q < k; ++q) acc -= H[q][i] * y[q];
    y[i] = H[i][i] == Complex{} ? Complex{} : acc / H[i][i];
  }
  CVector u(n, Complex{});
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t q = 0; q < n; ++q) u[q] += y[i] * V[i][q];
  }
  report.solution = precond(u);
  return report;
}

}  // namespace schwarzspec
