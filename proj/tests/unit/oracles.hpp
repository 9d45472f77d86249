#pragma once

// Reference implementations used as independent oracles. None of these share
// code with the library beyond the Matrix container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "glround/matrix.hpp"
#include "glround/random.hpp"

namespace oracle {

using glround::ExactMatrix;
using glround::Rational;

// Laplace expansion along the first row.
inline Rational cofactor_det(const ExactMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  Rational total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    if (a(0, c) == 0) continue;
    ExactMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t k = 0, kk = 0; k < n; ++k)
        if (k != c) minor(r - 1, kk++) = a(r, k);
    const Rational term = a(0, c) * cofactor_det(minor);
    total += (c % 2 == 0) ? term : Rational(-term);
  }
  return total;
}

// Triple loop product, kept separate from mat_mul.
inline ExactMatrix naive_mul(const ExactMatrix& a, const ExactMatrix& b) {
  ExactMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> s) {
  const std::size_t n = s.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += s[p][q] * s[p][q];
    if (off < 1e-300) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (s[p][q] == 0.0) continue;
        const double theta = (s[q][q] - s[p][p]) / (2.0 * s[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), sn = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double skp = s[k][p], skq = s[k][q];
          s[k][p] = c * skp - sn * skq;
          s[k][q] = sn * skp + c * skq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double spk = s[p][k], sqk = s[q][k];
          s[p][k] = c * spk - sn * sqk;
          s[q][k] = sn * spk + c * sqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = s[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

// Largest singular value as sqrt of the top eigenvalue of A^T A, computed
// in long double from the exact entries.
inline double singular_max(const ExactMatrix& a) {
  const std::size_t n = a.cols();
  std::vector<std::vector<double>> g(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational s = 0;
      for (std::size_t k = 0; k < a.rows(); ++k) s += a(k, i) * a(k, j);
      g[i][j] = s.get_d();
    }
  return std::sqrt(jacobi_eigenvalues(g).back());
}

// Held-Karp dynamic program over subsets: optimal tour weight.
inline std::int64_t held_karp(const std::vector<std::vector<std::int64_t>>& w) {
  const std::size_t n = w.size();
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::vector<std::int64_t>> dp(std::size_t{1} << n, std::vector<std::int64_t>(n, inf));
  dp[1][0] = 0;
  for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
    if (!(mask & 1)) continue;
    for (std::size_t last = 0; last < n; ++last) {
      if (!(mask & (std::size_t{1} << last)) || dp[mask][last] >= inf) continue;
      for (std::size_t nxt = 0; nxt < n; ++nxt) {
        if (mask & (std::size_t{1} << nxt)) continue;
        const std::size_t m2 = mask | (std::size_t{1} << nxt);
        dp[m2][nxt] = std::min(dp[m2][nxt], dp[mask][last] + w[last][nxt]);
      }
    }
  }
  std::int64_t best = inf;
  const std::size_t full = (std::size_t{1} << n) - 1;
  for (std::size_t last = 1; last < n; ++last) best = std::min(best, dp[full][last] + w[last][0]);
  return best;
}

// Canonical p/q; mpq_class(p, q) alone does not reduce.
inline Rational frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

inline ExactMatrix random_integer_matrix(glround::SplitMix64& rng, std::size_t rows, std::size_t cols, long bound) {
  ExactMatrix m(rows, cols);
  for (auto& x : m.entries()) x = static_cast<long>(rng.uniform_index(2 * bound + 1)) - bound;
  return m;
}

inline double gaussian(glround::SplitMix64& rng) {
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

inline std::vector<double> random_unit(glround::SplitMix64& rng, std::size_t d) {
  std::vector<double> v(d);
  double n2 = 0.0;
  for (auto& x : v) {
    x = gaussian(rng);
    n2 += x * x;
  }
  for (auto& x : v) x /= std::sqrt(n2);
  return v;
}

}  // namespace oracle
