#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "glround/matrix.hpp"

namespace glround {

/// A point of real projective space, stored as a unit vector whose first
/// nonzero coordinate is positive (antipodal points are identified).
class ProjPoint {
 public:
  /// Normalizes and canonicalizes; throws DomainError on the zero vector.
  explicit ProjPoint(RealVector direction);

  std::size_t dim() const noexcept { return v_.size(); }
  const RealVector& direction() const noexcept { return v_; }
  double operator[](std::size_t i) const { return v_[i]; }

 private:
  RealVector v_;
};

/// delta(x, y) = |x ^ y| / (|x| |y|), the sine of the angle between the lines.
/// Computed from the component of x orthogonal to y, which stays accurate
/// for nearly parallel inputs.
double angular_distance(std::span<const double> x, std::span<const double> y);
double proj_distance(const ProjPoint& x, const ProjPoint& y);

double euclidean_norm(std::span<const double> v);

/// Largest singular value by power iteration on A^T A.
double operator_norm(const RealMatrix& a);
double operator_norm(const ExactMatrix& a);

struct SingularPair {
  double sigma = 0.0;
  RealVector right;  // unit vector w with |A w| = sigma
};

/// Top singular value and right singular vector. Start vector is all ones
/// perturbed by index; the iteration cap is 10^6.
SingularPair top_singular_pair(const RealMatrix& a);

/// Unit w with |A w| = |A|. Degenerate top singular spaces return the
/// power-iteration fixed point.
ProjPoint max_stretch_direction(const RealMatrix& a);
ProjPoint max_stretch_direction(const ExactMatrix& a);

/// Spectral radius through the Gelfand limit |A^(2^j)|^(2^-j), computed by
/// repeated normalized squaring.
double spectral_radius(const RealMatrix& a);

/// Power iteration on A itself. `converged` is false when no single
/// dominant eigen-direction attracts the iteration.
struct EigenDirection {
  RealVector direction;
  bool converged = false;
};
EigenDirection dominant_eigen_direction(const RealMatrix& a);

/// Index pairs (i, j), i < j, in lexicographic order: the basis e_i ^ e_j of the exterior square.
std::vector<std::pair<std::size_t, std::size_t>> exterior_basis(std::size_t d);

/// Matrix of 2x2 minors in the lexicographic basis e_i ^ e_j, i < j.
template <class T>
Matrix<T> exterior_square(const Matrix<T>& a) {
  if (!a.square()) throw DimensionError("exterior_square: matrix is not square");
  if (a.rows() < 2) throw DimensionError("exterior_square: dimension must be at least 2");
  const auto basis = exterior_basis(a.rows());
  Matrix<T> out(basis.size(), basis.size());
  for (std::size_t r = 0; r < basis.size(); ++r) {
    const auto [i, j] = basis[r];
    for (std::size_t c = 0; c < basis.size(); ++c) {
      const auto [k, l] = basis[c];
      out(r, c) = a(i, k) * a(j, l) - a(i, l) * a(j, k);
    }
  }
  return out;
}

}  // namespace glround
