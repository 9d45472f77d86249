#include "glround/spectral.hpp"

#include <cmath>
#include <limits>

namespace glround {

namespace {

constexpr std::size_t kIterationCap = 1'000'000;
constexpr double kValueTolerance = 1e-10;

void normalize(RealVector& v) {
  const double n = euclidean_norm(v);
  for (auto& x : v) x /= n;
}

RealVector start_vector(std::size_t d) {
  RealVector v(d);
  for (std::size_t i = 0; i < d; ++i) v[i] = 1.0 + 0.1 * static_cast<double>(i + 1) / static_cast<double>(d + 1);
  normalize(v);
  return v;
}

double frobenius(const RealMatrix& a) {
  double acc = 0.0;
  for (double x : a.entries()) acc += x * x;
  return std::sqrt(acc);
}

// Aligns the sign of v with ref so successive iterates are comparable.
void align(RealVector& v, const RealVector& ref) {
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * ref[i];
  if (s < 0) {
    for (auto& x : v) x = -x;
  }
}

double distance(const RealVector& a, const RealVector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(acc);
}

}  // namespace

ProjPoint::ProjPoint(RealVector direction) : v_(std::move(direction)) {
  const double n = euclidean_norm(v_);
  if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("ProjPoint: zero or non-finite vector");
  for (auto& x : v_) x /= n;
  for (double x : v_) {
    if (x == 0.0) continue;
    if (x < 0.0) {
      for (auto& y : v_) y = -y;
    }
    break;
  }
}

double euclidean_norm(std::span<const double> v) {
  // Scaled accumulation guards against overflow for large entries.
  double scale = 0.0;
  for (double x : v) scale = std::max(scale, std::fabs(x));
  if (scale == 0.0) return 0.0;
  double acc = 0.0;
  for (double x : v) {
    const double y = x / scale;
    acc += y * y;
  }
  return scale * std::sqrt(acc);
}

double angular_distance(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("angular_distance: dimension mismatch");
  const double nx = euclidean_norm(x);
  const double ny = euclidean_norm(y);
  if (nx == 0.0 || ny == 0.0) throw DomainError("angular_distance: zero vector");
  double c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) c += (x[i] / nx) * (y[i] / ny);
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = x[i] / nx - c * (y[i] / ny);
    acc += r * r;
  }
  return std::min(1.0, std::sqrt(acc));
}

double proj_distance(const ProjPoint& x, const ProjPoint& y) {
  // Canonical representatives make equal points bitwise equal.
  if (x.direction() == y.direction()) return 0.0;
  return angular_distance(x.direction(), y.direction());
}

SingularPair top_singular_pair(const RealMatrix& a) {
  if (!a.square()) throw DimensionError("top_singular_pair: matrix is not square");
  const std::size_t d = a.rows();
  double max_abs = 0.0;
  for (double x : a.entries()) max_abs = std::max(max_abs, std::fabs(x));
  if (max_abs == 0.0) return {0.0, start_vector(d)};
  // Power-of-two rescaling is exact, so orthogonal and permutation matrices
  // keep a Rayleigh quotient of exactly 1.
  int exponent = 0;
  std::frexp(max_abs, &exponent);
  const double scale = std::ldexp(1.0, exponent);
  RealMatrix b = a;
  for (auto& x : b.entries()) x /= scale;
  const RealMatrix gram = mat_mul(b.transpose(), b);

  auto rayleigh = [&](const RealVector& v, const RealVector& gv) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      num += v[i] * gv[i];
      den += v[i] * v[i];
    }
    return num / den;
  };

  RealVector v = start_vector(d);
  RealVector gv = mat_vec(gram, v);
  double lambda = rayleigh(v, gv);
  bool value_settled = false;
  double last_step = std::numeric_limits<double>::infinity();
  std::size_t stalls = 0;
  for (std::size_t it = 0; it < kIterationCap; ++it) {
    RealVector next = gv;
    if (euclidean_norm(next) == 0.0) {
      value_settled = true;
      break;
    }
    normalize(next);
    align(next, v);
    RealVector next_gv = mat_vec(gram, next);
    const double next_lambda = rayleigh(next, next_gv);
    const double step = distance(next, v);
    const bool value_close = std::fabs(next_lambda - lambda) <= kValueTolerance * std::fabs(next_lambda);
    v = std::move(next);
    gv = std::move(next_gv);
    lambda = next_lambda;
    if (value_close) value_settled = true;
    // Once the value has settled, keep refining the direction until it stops moving.
    if (value_settled) {
      if (step <= 1e-15) break;
      // Rounding noise floor: the step stops shrinking.
      if (step >= last_step) ++stalls;
      if (stalls >= 16) break;
    }
    last_step = step;
  }
  if (!value_settled) throw ConvergenceError("power iteration did not converge within 10^6 steps");
  return {std::sqrt(std::max(lambda, 0.0)) * scale, v};
}

double operator_norm(const RealMatrix& a) { return top_singular_pair(a).sigma; }

double operator_norm(const ExactMatrix& a) { return operator_norm(to_real(a)); }

ProjPoint max_stretch_direction(const RealMatrix& a) { return ProjPoint(top_singular_pair(a).right); }

ProjPoint max_stretch_direction(const ExactMatrix& a) { return max_stretch_direction(to_real(a)); }

double spectral_radius(const RealMatrix& a) {
  if (!a.square()) throw DimensionError("spectral_radius: matrix is not square");
  double norm = frobenius(a);
  if (norm == 0.0) return 0.0;
  RealMatrix m = a;
  for (auto& x : m.entries()) x /= norm;
  // m^(2^j) = exp(log_scale) * current, |current|_F = 1.
  double log_scale = std::log(norm);
  double exponent = 1.0;
  for (int j = 0; j < 60; ++j) {
    RealMatrix sq = mat_mul(m, m);
    const double n = frobenius(sq);
    if (n == 0.0 || !std::isfinite(n)) return n == 0.0 ? 0.0 : std::exp(log_scale / exponent);
    for (auto& x : sq.entries()) x /= n;
    m = std::move(sq);
    log_scale = 2.0 * log_scale + std::log(n);
    exponent *= 2.0;
  }
  return std::exp(log_scale / exponent);
}

EigenDirection dominant_eigen_direction(const RealMatrix& a) {
  if (!a.square()) throw DimensionError("dominant_eigen_direction: matrix is not square");
  RealVector v = start_vector(a.rows());
  for (std::size_t it = 0; it < 100'000; ++it) {
    RealVector next = mat_vec(a, v);
    if (euclidean_norm(next) == 0.0) return {v, false};
    normalize(next);
    align(next, v);
    const double step = distance(next, v);
    v = std::move(next);
    if (step <= 1e-14) return {v, true};
  }
  return {v, false};
}

std::vector<std::pair<std::size_t, std::size_t>> exterior_basis(std::size_t d) {
  std::vector<std::pair<std::size_t, std::size_t>> basis;
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) basis.emplace_back(i, j);
  return basis;
}

}  // namespace glround
