#pragma once

#include <Eigen/Core>

#include <array>
#include <complex>
#include <optional>
#include <string>

#include "bimero/gaussian_rational.hpp"

namespace bimero {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3cd;
using Mat3 = Eigen::Matrix3cd;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

/// Global tolerance for numeric projective equality.
inline constexpr double kProjectiveTolerance = 1e-9;

/// Point of P^2 with double-precision coordinates. The stored representative has
/// unit Euclidean norm and its largest-modulus coordinate is real and positive,
/// so equal points have (nearly) identical representatives.
class ProjectivePoint {
 public:
  ProjectivePoint() = default;
  /// Throws ZeroVector (or NumericUnderflow for non-finite input).
  explicit ProjectivePoint(const Vec3& coords);
  ProjectivePoint(Complex x, Complex y, Complex z) : ProjectivePoint(Vec3(x, y, z)) {}

  const Vec3& unit() const noexcept { return unit_; }
  Complex operator[](int i) const { return unit_(i); }
  /// Index of the largest-modulus coordinate (the natural affine chart).
  int dominant_index() const;

  std::string to_string() const;

 private:
  Vec3 unit_ = Vec3(1, 0, 0);
};

/// Point of P^2 with Gaussian-rational coordinates, scaled so that the first
/// nonzero coordinate is 1.
class ExactPoint {
 public:
  ExactPoint() = default;
  /// Throws ZeroVector.
  explicit ExactPoint(std::array<GaussianRational, 3> coords);
  ExactPoint(long x, long y, long z) : ExactPoint({GaussianRational(x), GaussianRational(y), GaussianRational(z)}) {}

  const std::array<GaussianRational, 3>& coords() const noexcept { return coords_; }
  const GaussianRational& operator[](int i) const { return coords_[i]; }
  ProjectivePoint to_numeric() const;
  std::size_t bit_size() const;
  std::string to_string() const;

  friend bool operator==(const ExactPoint& a, const ExactPoint& b) { return a.coords_ == b.coords_; }

 private:
  std::array<GaussianRational, 3> coords_{GaussianRational(1), GaussianRational(0), GaussianRational(0)};
};

/// Fubini-Study chordal distance sqrt(1 - |<p,q>|^2) of unit representatives.
double proj_distance(const ProjectivePoint& p, const ProjectivePoint& q);
double proj_distance(const Vec3& p, const Vec3& q);

bool proj_equal(const ProjectivePoint& p, const ProjectivePoint& q, double tol = kProjectiveTolerance);

/// Orthonormal basis (columns) of the Hermitian complement of a unit vector.
Eigen::Matrix<Complex, 3, 2> orthonormal_complement(const Vec3& unit);

/// Point at chordal distance `r` from `center` in the tangent direction `dir`
/// (any vector; its component along `center` is discarded). Requires 0 <= r < 1.
ProjectivePoint point_at_distance(const ProjectivePoint& center, const Vec3& dir, double r);

}  // namespace bimero
