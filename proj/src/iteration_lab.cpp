#include "schwarzspec/iteration_lab.hpp"

#include <cmath>
#include <random>

namespace schwarzspec {

IterationMatrix build_iteration_matrix(Complex a, Complex b, int N, Degenerate degenerate) {
  if (N < 2) throw std::invalid_argument("build_iteration_matrix: N must be >= 2");
  ToeplitzBlocks blocks(a, b, N - 1, degenerate);
  const auto n = static_cast<std::size_t>(2 * (N - 1));
  DenseMatrix T(n, n);

  auto has_minus = [N](int j) { return j >= 2 && j <= N; };
  auto has_plus = [N](int j) { return j >= 1 && j <= N - 1; };
  using IV = InterfaceVector;

  for (int j = 1; j <= N; ++j) {
    // [R-(a_j), R+(b_j)] = T1 [R-(a_{j-1}), R+(b_{j-1})] + T2 [R-(a_{j+1}), R+(b_{j+1})]
    if (has_minus(j)) {
      const auto row = IV::index_minus(j);
      if (has_minus(j - 1)) T(row, IV::index_minus(j - 1)) += a;
      if (has_plus(j - 1)) T(row, IV::index_plus(j - 1)) += b;
    }
    if (has_plus(j)) {
      const auto row = IV::index_plus(j);
      if (has_minus(j + 1)) T(row, IV::index_minus(j + 1)) += b;
      if (has_plus(j + 1)) T(row, IV::index_plus(j + 1)) += a;
    }
  }
  return {blocks, std::move(T)};
}

InterfaceVector::InterfaceVector(int N, CVector entries) : N_(N), entries_(std::move(entries)) {
  if (N < 2) throw std::invalid_argument("InterfaceVector: N must be >= 2");
  if (entries_.size() != static_cast<std::size_t>(2 * (N - 1))) {
    throw std::invalid_argument("InterfaceVector: length must be 2(N-1)");
  }
  for (const auto& e : entries_) require_finite(e, "interface value");
}

InterfaceVector InterfaceVector::random(int N, std::uint64_t seed) {
  if (N < 2) throw std::invalid_argument("InterfaceVector: N must be >= 2");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  CVector v(static_cast<std::size_t>(2 * (N - 1)));
  for (auto& x : v) x = {gauss(rng), gauss(rng)};
  return {N, std::move(v)};
}

IterationHistory iterate(const IterationMatrix& matrix, const InterfaceVector& r0, int steps) {
  if (steps < 1) throw std::invalid_argument("iterate: steps must be >= 1");
  if (r0.entries().size() != matrix.dense.cols()) throw std::invalid_argument("iterate: size mismatch");
  const double n0 = norm2(r0.entries());
  if (n0 == 0.0) throw std::invalid_argument("iterate: r0 must be non-zero");

  IterationHistory h;
  h.steps = steps;
  h.norms.reserve(static_cast<std::size_t>(steps) + 1);
  h.norms.push_back(n0);
  CVector r = r0.entries();
  for (int n = 1; n <= steps; ++n) {
    r = matrix.dense.apply(r);
    h.norms.push_back(norm2(r));
  }

  const std::size_t total = h.norms.size();
  std::size_t start = (2 * total) / 3;
  if (total - start < 2) start = total - 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(total - start);
  for (std::size_t i = start; i < total; ++i) {
    if (h.norms[i] == 0.0) {
      h.estimated_rate = 0.0;
      return h;
    }
    const double x = static_cast<double>(i), y = std::log(h.norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  h.estimated_rate = std::exp(slope);
  return h;
}

std::vector<RadiusPoint> spectral_radius_curve(const SchwarzParams& params, const std::vector<int>& N_list,
                                               std::optional<double> k_tilde, const SpectrumOptions& options) {
  params.validate();
  const SchwarzCoefficients c =
      k_tilde ? coefficients_from(zeta_mode(params.k, params.sigma, *k_tilde), params.alpha_value(), params.delta,
                                  params.L)
              : coefficients_1d(params);
  const double bound = r1d_bound(c.a, c.b);
  std::vector<RadiusPoint> out;
  out.reserve(N_list.size());
  for (int N : N_list) {
    if (N < 2) throw std::invalid_argument("spectral_radius_curve: every N must be >= 2");
    const auto report = spectrum(ToeplitzBlocks(c.a, c.b, N - 1), options);
    out.push_back({N, report.spectral_radius, bound});
  }
  return out;
}

double nilpotency_check(double k, double delta, double L, int N) {
  SchwarzParams p;
  p.k = k;
  p.sigma = 0.0;
  p.delta = delta;
  p.L = L;
  p.alpha = AlphaMode::impedance();
  p.N = N;
  const auto c = coefficients_1d(p);
  const auto M = build_iteration_matrix(c.a, c.b, N, Degenerate::allow);
  DenseMatrix power = M.dense;
  for (int i = 1; i < N - 1; ++i) power = power * M.dense;
  const double scale = std::pow(std::max(1.0, M.dense.inf_norm()), N - 1);
  return power.frobenius_norm() / scale;
}

}  // namespace schwarzspec
