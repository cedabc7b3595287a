#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bimero/energy.hpp"
#include "bimero/surface_map.hpp"

namespace bimero {

enum class CloudProvenance { SaddleOrbits, Intersections };

struct CloudPoint {
  ProjectivePoint point;
  /// Minimal period and index of the orbit within the cloud.
  int period = 1;
  int orbit = 0;
  /// Moduli of the eigenvalues of D(f^period), largest first.
  double lambda_max = 0;
  double lambda_min = 0;
  /// Chordal distance from f^period(x) to x.
  double residual = 0;
  /// Radius of the Kantorovich uniqueness ball in chart coordinates.
  double certified_radius = 0;
};

/// Points with rational weights numerator / denominator (summing to 1 exactly).
struct WeightedPointCloud {
  std::vector<CloudPoint> points;
  std::vector<long> numerators;
  long denominator = 1;
  CloudProvenance provenance = CloudProvenance::SaddleOrbits;
  int max_period = 0;

  std::size_t size() const noexcept { return points.size(); }
  double weight(std::size_t i) const { return static_cast<double>(numerators[i]) / denominator; }
  /// Equal weights 1/size.
  void set_uniform_weights();
};

struct SaddleSearchOptions {
  /// Newton starts per period.
  int starts = 3000;
  /// Starts are drawn from the box |Re|, |Im| <= box of the affine chart.
  double box = 2.0;
  int chart = 2;
  std::uint64_t seed = 1;
  double dedupe = 1e-7;
  int newton_iterations = 80;
  /// Required chordal residual of f^n(x) = x.
  double residual_tolerance = 1e-9;
  /// Saddle test: one modulus above 1 + gap, one below 1 - gap.
  double saddle_gap = 1e-6;
  unsigned workers = 0;
};

struct PeriodicOrbit {
  int period = 1;
  std::vector<ProjectivePoint> points;
  double lambda_max = 0;
  double lambda_min = 0;
  double residual = 0;
  double certified_radius = 0;
  bool certified = false;
  bool saddle = false;
};

/// Certified orbits of minimal period n found by multiple-shooting Newton in
/// the affine chart. Orbits meeting the line at infinity of the chart or
/// passing within 1e-9 of I(f) or I(f^{-1}) are not reported.
std::vector<PeriodicOrbit> periodic_orbits(const RationalSurfaceMap& f, int n, const SaddleSearchOptions& options = {});

/// Saddle points of minimal period n, equal weights. Throws NoSaddlesFound,
/// MissingInverse, InvalidArgument (n < 1 or stored inverse fails verify_inverse).
WeightedPointCloud saddle_periodic_points(const RationalSurfaceMap& f, int n, const SaddleSearchOptions& options = {});
/// Union over minimal periods 1..max_period, equal weights.
WeightedPointCloud saddle_cloud(const RationalSurfaceMap& f, int max_period, const SaddleSearchOptions& options = {});

using Observable = std::function<double(const ProjectivePoint&)>;

double measure_average(const WeightedPointCloud& cloud, const Observable& phi);
/// Weighted standard error of the mean using the effective sample size of the weights.
double measure_standard_error(const WeightedPointCloud& cloud, const Observable& phi);

/// |sum w phi(f x) - sum w phi(x)|. Throws OrbitHitIndeterminacy if f(x) is undefined.
double invariance_residual(const RationalSurfaceMap& f, const WeightedPointCloud& cloud, const Observable& phi);

/// C_n = sum w phi(x) psi(f^n x) - (sum w phi)(sum w psi o f^n).
double mixing_correlation(const RationalSurfaceMap& f, const WeightedPointCloud& cloud, const Observable& phi,
                          const Observable& psi, int n);

/// Mass of the chordal ball B(x, r) under the cloud.
double ball_mass(const WeightedPointCloud& cloud, const ProjectivePoint& x, double r);

struct BallDecay {
  std::vector<double> radii;
  std::vector<double> masses;
  /// Slope of -log(mass) against n for r_n = r0 * rho^{-n/2}.
  double exponent = 0;
};
/// Mean cloud mass of balls around the cloud points with r_n = r0 rho^{-n/2}, n = 0..steps.
BallDecay ball_mass_decay(const WeightedPointCloud& cloud, double rho, double r0, int steps);

namespace observables {

/// z^H A z / |z|^2 for a Hermitian A.
Observable hermitian_quadratic(const Mat3& a);
/// max(0, 1 - d(x, center)^2 / s^2)^2 with d the chordal distance.
Observable point_bump(const ProjectivePoint& center, double s);
/// max(0, 1 - d(x, L)^2 / s^2)^2 for the line L = {n . z = 0}.
Observable line_tube(const Vec3& normal, double s);
/// Deterministic family of smooth observables (Hermitian quadratics) for cloud comparisons.
std::vector<Observable> smooth_family(int count, std::uint64_t seed);

}  // namespace observables

/// CSV with columns re/im of the unit representative, weight, period, orbit, moduli.
std::string cloud_to_csv(const WeightedPointCloud& cloud);

}  // namespace bimero
