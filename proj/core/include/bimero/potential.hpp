#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bimero/cohomology.hpp"
#include "bimero/surface_map.hpp"

namespace bimero {

enum class Direction { Forward, Backward };

/// Potentials gamma = rho^{-1} log|F(z)| of the unit-normalized homogeneous lift,
/// and the truncated Green series g_N = sum_{j<N} rho^{-j} gamma o f^j.
/// Backward evaluators run the same code on the inverse triple.
class PotentialEvaluator {
 public:
  /// Throws InvalidArgument if rho <= 0 or (Backward) the stored inverse fails
  /// verify_inverse, MissingInverse for Backward without an inverse.
  PotentialEvaluator(const RationalSurfaceMap& f, double rho, Direction direction = Direction::Forward,
                     double eps = kIndeterminacyTolerance);

  const RationalSurfaceMap& map() const noexcept { return map_; }
  double rho() const noexcept { return rho_; }
  Direction direction() const noexcept { return direction_; }

  /// -infinity where the lift vanishes exactly.
  double gamma(const ProjectivePoint& p) const;
  double gamma(const Vec3& unit) const;

  /// Termwise series. Returns -infinity if the orbit lands exactly on I(f);
  /// throws OrbitHitIndeterminacy(j) if f^j(p) is within eps of I(f) numerically.
  double green_partial(const ProjectivePoint& p, int n) const;
  /// rho^{-N} log|F^N(z)|, iterating the unnormalized lift with exact power-of-two
  /// rescaling. Equals green_partial when rho = deg f.
  double green_telescoped(const ProjectivePoint& p, int n) const;

  struct FunctionalCheck {
    double residual = 0.0;
    /// rho^{-N} * max |gamma| along the orbit * rho / (rho - 1).
    double tail_bound = 0.0;
  };
  /// |g_N(f p) - rho (g_{N+1}(p) - gamma(p))| with g_N(f p) from the telescoped
  /// path and g_{N+1}(p) from the termwise path.
  FunctionalCheck functional_check(const ProjectivePoint& p, int n) const;

  /// max over j < n of |gamma(f^j p)|.
  double orbit_gamma_max(const ProjectivePoint& p, int n) const;

 private:
  RationalSurfaceMap map_;
  const NumericMap* lift_;
  double rho_;
  Direction direction_;
  double eps_;
};

struct SingularityFit {
  ProjectivePoint point;
  /// Lower envelope A log d - B and upper envelope A' log d + B'.
  double A = 0, B = 0, A_prime = 0, B_prime = 0;
  /// Least-squares slope and intercept of u against log d over all samples.
  double ls_slope = 0, ls_intercept = 0, ls_rms = 0;
  std::vector<double> radii;
  std::size_t samples = 0;

  bool contains(double log_distance, double value, double slack = 0.0) const;
};

struct ShellSample {
  double log_distance;
  double value;
};

/// Samples u on chordal spheres around q: `per_shell` points per radius.
std::vector<ShellSample> shell_samples(const std::function<double(const ProjectivePoint&)>& u, const ProjectivePoint& q,
                                       const std::vector<double>& radii, int per_shell, std::uint64_t seed);

/// Two-sided logarithmic envelope of gamma around q in I(f). The per-shell
/// extremes are refined by local search over directions, so the envelope
/// encloses the shell range and not only the drawn samples.
/// Throws InsufficientSamples (fewer than 3 radii or radii not decreasing or
/// below 1e-7) and InvalidArgument if q is not within eps of I(f).
SingularityFit singularity_fit(const PotentialEvaluator& ev, const ProjectivePoint& q, const std::vector<double>& radii,
                               int per_shell = 512, std::uint64_t seed = 1);

struct ShellMean {
  double radius;
  double mean;
};

/// Slope of the shell means against log r over the smallest four radii, clamped
/// at 0. Throws InsufficientSamples with fewer than 4 shells.
double lelong_estimate(std::vector<ShellMean> shells);

struct LelongOptions {
  int shells = 8;
  double r_min = 1e-5;
  double r_max = 1e-2;
  int samples_per_shell = 256;
  std::uint64_t seed = 1;
};

/// Shell means of u around x on chordal spheres (geometric radii).
std::vector<ShellMean> shell_means(const std::function<double(const ProjectivePoint&)>& u, const ProjectivePoint& x,
                                   const LelongOptions& options = {});

/// Potentials gamma_k of a lattice basis and the dynamics on unit vectors,
/// as used by the class-level series g_n eta.
struct ClassPotentials {
  std::function<double(int, const Vec3&)> gamma;
  std::function<Vec3(const Vec3&)> step;
};

/// P^2: gamma_1 = log|F(z)| (so that g_n theta+ = green_partial).
ClassPotentials p2_class_potentials(const RationalSurfaceMap& f);

/// g_n eta = rho^{-n} (p(eta) o f^n + sum_{j<n} sum_k (Mf^j eta)_k gamma_k(f^{n-j-1} x)).
double gn_eta(const CohomologyLattice& lattice, double rho, const ClassPotentials& potentials, const RealVector& eta,
              const std::function<double(const Vec3&)>& p_eta, const ProjectivePoint& x, int n);

/// Monte-Carlo mean of |a - b| over FS-uniform points.
double monte_carlo_l1(const std::function<double(const ProjectivePoint&)>& a,
                      const std::function<double(const ProjectivePoint&)>& b, int samples, std::uint64_t seed);

/// Values of fn on a resolution x resolution grid over the real slice
/// (Re u1, Re u2) in center +- half_width of the affine chart `chart`
/// (imaginary parts taken from the center). Row-major, first axis fastest.
struct ChartSlice {
  int chart = 2;
  Complex u1 = 0, u2 = 0;
  double half_width = 2.0;
  int resolution = 128;
  Vec3 point(int i, int j) const;
};
std::vector<double> sample_slice(const ChartSlice& slice, const std::function<double(const Vec3&)>& fn);

/// Affine rescaling recorded in the PGM sidecar: value = offset + scale * sample.
struct PgmScale {
  double offset = 0;
  double scale = 0;
  double min = 0, max = 0;
  std::size_t non_finite = 0;
};
/// Binary P5, 16-bit big-endian; non-finite values map to 0. Returns the scale.
PgmScale write_pgm(const std::string& path, const std::vector<double>& values, int width, int height);

}  // namespace bimero
