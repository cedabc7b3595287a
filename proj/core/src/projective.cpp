#include "bimero/projective.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "bimero/error.hpp"

namespace bimero {

ProjectivePoint::ProjectivePoint(const Vec3& coords) {
  const double n = coords.norm();
  if (!std::isfinite(n)) throw Error(ErrorCode::NumericUnderflow, "non-finite projective coordinates");
  if (n == 0.0) throw Error(ErrorCode::ZeroVector, "all projective coordinates are zero");
  Vec3 u = coords / n;
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(u(i)) > std::abs(u(k)) * (1 + 1e-12)) k = i;
  }
  const Complex phase = std::conj(u(k)) / std::abs(u(k));
  unit_ = u * phase;
  unit_(k) = Complex(std::abs(unit_(k)), 0.0);
}

int ProjectivePoint::dominant_index() const {
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(unit_(i)) > std::abs(unit_(k))) k = i;
  }
  return k;
}

std::string ProjectivePoint::to_string() const {
  auto c = [](Complex v) { return fmt::format("{:.12g}{:+.12g}i", v.real(), v.imag()); };
  return fmt::format("[{}:{}:{}]", c(unit_(0)), c(unit_(1)), c(unit_(2)));
}

ExactPoint::ExactPoint(std::array<GaussianRational, 3> coords) {
  int k = -1;
  for (int i = 0; i < 3; ++i) {
    if (!coords[i].is_zero()) {
      k = i;
      break;
    }
  }
  if (k < 0) throw Error(ErrorCode::ZeroVector, "all exact projective coordinates are zero");
  const GaussianRational lead = coords[k];
  for (auto& c : coords) c /= lead;
  coords_ = std::move(coords);
}

ProjectivePoint ExactPoint::to_numeric() const {
  return ProjectivePoint(Vec3(coords_[0].to_complex(), coords_[1].to_complex(), coords_[2].to_complex()));
}

std::size_t ExactPoint::bit_size() const {
  return std::max({coords_[0].bit_size(), coords_[1].bit_size(), coords_[2].bit_size()});
}

std::string ExactPoint::to_string() const {
  return "[" + coords_[0].to_string() + ":" + coords_[1].to_string() + ":" + coords_[2].to_string() + "]";
}

double proj_distance(const Vec3& p, const Vec3& q) {
  const double np = p.norm();
  const double nq = q.norm();
  if (np == 0.0 || nq == 0.0) throw Error(ErrorCode::ZeroVector, "zero vector in proj_distance");
  // |p x q| / (|p||q|) equals sqrt(1 - |<p,q>|^2) and avoids cancellation near 0.
  const Vec3 a = p / np;
  const Vec3 b = q / nq;
  const Vec3 cross(a(1) * b(2) - a(2) * b(1), a(2) * b(0) - a(0) * b(2), a(0) * b(1) - a(1) * b(0));
  return std::min(1.0, cross.norm());
}

double proj_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
  return proj_distance(p.unit(), q.unit());
}

bool proj_equal(const ProjectivePoint& p, const ProjectivePoint& q, double tol) {
  return proj_distance(p, q) <= tol;
}

Eigen::Matrix<Complex, 3, 2> orthonormal_complement(const Vec3& unit) {
  // Gram-Schmidt against the standard basis vectors least aligned with `unit`.
  int order[3] = {0, 1, 2};
  std::sort(order, order + 3, [&](int a, int b) { return std::abs(unit(a)) < std::abs(unit(b)); });
  Eigen::Matrix<Complex, 3, 2> basis;
  int found = 0;
  for (int idx : order) {
    Vec3 e = Vec3::Zero();
    e(idx) = 1.0;
    Vec3 v = e - unit * unit.dot(e);
    for (int j = 0; j < found; ++j) v -= basis.col(j) * basis.col(j).dot(v);
    const double n = v.norm();
    if (n < 1e-8) continue;
    basis.col(found++) = v / n;
    if (found == 2) break;
  }
  return basis;
}

ProjectivePoint point_at_distance(const ProjectivePoint& center, const Vec3& dir, double r) {
  const Vec3& c = center.unit();
  Vec3 t = dir - c * c.dot(dir);
  const double n = t.norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "tangent direction parallel to the center");
  t /= n;
  // chordal distance of cos(a) c + sin(a) t from c is sin(a).
  const double a = std::asin(std::clamp(r, 0.0, 1.0));
  return ProjectivePoint(Vec3(c * std::cos(a) + t * std::sin(a)));
}

}  // namespace bimero
