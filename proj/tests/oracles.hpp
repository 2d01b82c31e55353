#pragma once
// Independent reference computations used only by the tests. None of these call
// the recurrence or root-finding code under test.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "schwarzspec/numerics.hpp"

namespace oracle {

using schwarzspec::Complex;
using schwarzspec::CVector;

inline Complex random_in_annulus(std::mt19937_64& rng, double rmin, double rmax) {
  std::uniform_real_distribution<double> r(rmin, rmax), th(-std::numbers::pi, std::numbers::pi);
  return std::polar(r(rng), th(rng));
}

inline Complex random_in_disc(std::mt19937_64& rng, double radius = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0), th(-std::numbers::pi, std::numbers::pi);
  return std::polar(radius * std::sqrt(u(rng)), th(rng));
}

// det of the 2m x 2m matrix D_m = T - z I written out entry by entry from the
// block pattern, by Gaussian elimination with partial pivoting on a local copy.
inline Complex det_shifted_toeplitz(Complex a, Complex b, int m, Complex z) {
  const int n = 2 * m;
  std::vector<Complex> A(static_cast<std::size_t>(n * n), Complex{});
  auto at = [&](int i, int j) -> Complex& { return A[static_cast<std::size_t>(i * n + j)]; };
  for (int i = 0; i < n; ++i) at(i, i) = -z;
  for (int blk = 0; blk < m; ++blk) {
    at(2 * blk, 2 * blk + 1) = b;
    at(2 * blk + 1, 2 * blk) = b;
    if (blk + 1 < m) {
      at(2 * blk, 2 * blk + 2) = a;
      at(2 * blk + 3, 2 * blk + 1) = a;
    }
  }
  Complex det = 1.0;
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i) {
      if (std::abs(at(i, k)) > std::abs(at(p, k))) p = i;
    }
    if (at(p, k) == Complex{}) return 0.0;
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      det = -det;
    }
    det *= at(k, k);
    for (int i = k + 1; i < n; ++i) {
      const Complex f = at(i, k) / at(k, k);
      for (int j = k; j < n; ++j) at(i, j) -= f * at(k, j);
    }
  }
  return det;
}

// Monomial coefficients (lowest first) of the degree-d interpolant of f at the
// d+1 points R e^{2 pi i j/(d+1)}. On these nodes the change to the monomial basis
// is a scaled inverse DFT, which stays well conditioned when the roots cluster.
template <class F>
CVector circle_interpolant(F f, int d, double R) {
  const int n = d + 1;
  CVector vals(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) vals[static_cast<std::size_t>(j)] = f(std::polar(R, 2.0 * std::numbers::pi * j / n));
  CVector c(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    Complex acc{};
    for (int j = 0; j < n; ++j) acc += vals[static_cast<std::size_t>(j)] * std::polar(1.0, -2.0 * std::numbers::pi * j * q / n);
    c[static_cast<std::size_t>(q)] = acc / (static_cast<double>(n) * std::pow(R, q));
  }
  return c;
}

// Hausdorff distance between two finite point sets.
inline double hausdorff(const CVector& A, const CVector& B) {
  auto directed = [](const CVector& P, const CVector& Q) {
    double worst = 0.0;
    for (const auto& p : P) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : Q) best = std::min(best, std::abs(p - q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(A, B), directed(B, A));
}

// Largest matching error between two multisets of the same size (greedy nearest pairing).
inline double multiset_distance(CVector A, CVector B) {
  double worst = 0.0;
  for (const auto& a : A) {
    auto it = std::min_element(B.begin(), B.end(),
                               [&](Complex x, Complex y) { return std::abs(x - a) < std::abs(y - a); });
    worst = std::max(worst, std::abs(*it - a));
    B.erase(it);
  }
  return worst;
}

// Coefficients a, b straight from the unscaled quotient of exponentials
// (moderate arguments only).
inline std::pair<Complex, Complex> raw_coefficients(Complex zeta, Complex alpha, double delta, double L) {
  const Complex p = (zeta + alpha) * (zeta + alpha);
  const Complex q = (zeta - alpha) * (zeta - alpha);
  const Complex D = p * std::exp(zeta * (2 * delta + L)) - q * std::exp(-zeta * (2 * delta + L));
  const Complex a = (p * std::exp(2.0 * zeta * delta) - q * std::exp(-2.0 * zeta * delta)) / D;
  const Complex b = -(zeta * zeta - alpha * alpha) * (std::exp(zeta * L) - std::exp(-zeta * L)) / D;
  return {a, b};
}

}  // namespace oracle
