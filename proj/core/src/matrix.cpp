#include "glround/matrix.hpp"

#include <cmath>
#include <utility>

namespace glround {

ExactMatrix mat_inverse(const ExactMatrix& a) {
  if (!a.square()) throw DimensionError("mat_inverse: matrix is not square");
  const std::size_t n = a.rows();
  ExactMatrix work = a;
  ExactMatrix inv = ExactMatrix::identity(n);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work(pivot, col) == 0) ++pivot;
    if (pivot == n) throw SingularMatrixError("mat_inverse: matrix is singular");
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(work(pivot, j), work(col, j));
        std::swap(inv(pivot, j), inv(col, j));
      }
    }
    const Rational p = work(col, col);
    for (std::size_t j = 0; j < n; ++j) {
      work(col, j) /= p;
      inv(col, j) /= p;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || work(r, col) == 0) continue;
      const Rational f = work(r, col);
      for (std::size_t j = 0; j < n; ++j) {
        work(r, j) -= f * work(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  return inv;
}

Rational determinant(const ExactMatrix& a) {
  if (!a.square()) throw DimensionError("determinant: matrix is not square");
  const std::size_t n = a.rows();
  ExactMatrix work = a;
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && work(pivot, col) == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(work(pivot, j), work(col, j));
      det = -det;
    }
    det *= work(col, col);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (work(r, col) == 0) continue;
      const Rational f = work(r, col) / work(col, col);
      for (std::size_t j = col; j < n; ++j) work(r, j) -= f * work(col, j);
    }
  }
  return det;
}

std::size_t exact_rank(std::vector<ExactVector> rows) {
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  std::size_t rank = 0;
  for (std::size_t c = 0; c < cols && rank < rows.size(); ++c) {
    std::size_t pivot = rank;
    while (pivot < rows.size() && rows[pivot][c] == 0) ++pivot;
    if (pivot == rows.size()) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = rank + 1; r < rows.size(); ++r) {
      if (rows[r][c] == 0) continue;
      const Rational f = rows[r][c] / rows[rank][c];
      for (std::size_t j = c; j < cols; ++j) rows[r][j] -= f * rows[rank][j];
    }
    ++rank;
  }
  return rank;
}

RealMatrix to_real(const ExactMatrix& a) {
  std::vector<double> entries;
  entries.reserve(a.entries().size());
  for (const auto& q : a.entries()) entries.push_back(to_double(q));
  return RealMatrix(a.rows(), a.cols(), std::move(entries));
}

RealVector to_real(const ExactVector& v) {
  RealVector out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(to_double(q));
  return out;
}

double log_norm(const ExactVector& v) { return 0.5 * log_abs(vec_norm_sq(v)); }

bool is_zero(const ExactVector& v) {
  for (const auto& q : v) {
    if (q != 0) return false;
  }
  return true;
}

}  // namespace glround
