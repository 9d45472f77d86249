#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "glround/errors.hpp"
#include "glround/rational.hpp"

namespace glround {

/// Dense row-major matrix. Instantiated for Rational (exact layer) and double
/// (spectral and projective diagnostics).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) {
      throw DimensionError("matrix entry count " + std::to_string(data_.size()) + " does not match " +
                           std::to_string(rows_) + "x" + std::to_string(cols_));
    }
  }
  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw DimensionError("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  const std::vector<T>& entries() const noexcept { return data_; }
  std::vector<T>& entries() noexcept { return data_; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ExactMatrix = Matrix<Rational>;
using RealMatrix = Matrix<double>;
using ExactVector = std::vector<Rational>;
using RealVector = std::vector<double>;

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                         std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  return mat_mul(a, b);
}

template <class T>
std::vector<T> mat_vec(const Matrix<T>& a, std::span<const T> v) {
  if (a.cols() != v.size()) throw DimensionError("mat_vec: dimension mismatch");
  std::vector<T> out(a.rows(), T(0));
  for (std::size_t i = 0; i < a.rows(); ++i) {
    T acc(0);
    for (std::size_t k = 0; k < a.cols(); ++k) acc += a(i, k) * v[k];
    out[i] = acc;
  }
  return out;
}

template <class T>
std::vector<T> mat_vec(const Matrix<T>& a, const std::vector<T>& v) {
  return mat_vec(a, std::span<const T>(v));
}

template <class T>
T dot(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) throw DimensionError("dot: dimension mismatch");
  T acc(0);
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

/// Sum of squared entries, exact for Rational.
template <class T>
T vec_norm_sq(std::span<const T> v) {
  T acc(0);
  for (const auto& x : v) acc += x * x;
  return acc;
}

template <class T>
T vec_norm_sq(const std::vector<T>& v) {
  return vec_norm_sq(std::span<const T>(v));
}

/// Sum-of-squares (Frobenius) distance between equally shaped matrices.
template <class T>
T matrix_distance_sq(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionError("matrix_distance_sq: shape mismatch");
  T acc(0);
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    T diff = a.entries()[i] - b.entries()[i];
    acc += diff * diff;
  }
  return acc;
}

/// Exact inverse by Gauss-Jordan elimination over the rationals.
ExactMatrix mat_inverse(const ExactMatrix& a);

Rational determinant(const ExactMatrix& a);

/// Rank over Q of the given row vectors.
std::size_t exact_rank(std::vector<ExactVector> rows);

RealMatrix to_real(const ExactMatrix& a);
RealVector to_real(const ExactVector& v);

/// 0.5 * log of the exact squared norm; robust for entries far beyond double range.
double log_norm(const ExactVector& v);

bool is_zero(const ExactVector& v);

}  // namespace glround
