#pragma once

#include <string_view>
#include <vector>

#include "bimero/measure.hpp"

namespace bimero {

inline constexpr double kOrbitExclusionRadius = 1e-6;

struct LyapunovOptions {
  int steps = 200;
  /// Orbits passing within this chordal distance of I(f) are dropped.
  double exclusion_radius = kOrbitExclusionRadius;
  /// An image within this distance of a cloud point continues from that point.
  double snap_tolerance = 1e-7;
  unsigned workers = 0;
};

struct LyapunovEstimate {
  double chi_plus = 0;
  double chi_minus = 0;
  int n_steps = 0;
  CloudProvenance provenance = CloudProvenance::SaddleOrbits;
  /// Weighted standard errors of the means across retained points.
  double se_plus = 0;
  double se_minus = 0;
  double se_sum = 0;
  /// Per-point exponents, NaN for excluded points.
  std::vector<double> point_plus;
  std::vector<double> point_minus;
  std::size_t excluded = 0;
  double excluded_mass = 0;
  /// Largest per-orbit gap between the accumulated QR logs and log|det Df|.
  double determinant_residual = 0;

  double standard_error() const noexcept { return std::max(se_plus, se_minus); }
};

/// QR-accumulated exponents of the Fubini-Study tangent cocycle along n steps
/// from each cloud point. Throws AllOrbitsExcluded, InvalidArgument (steps < 1).
LyapunovEstimate cocycle_exponents(const RationalSurfaceMap& f, const WeightedPointCloud& cloud,
                                   const LyapunovOptions& options = {});

enum class IntegrabilityVerdict { IntegrableConsistent, Inconclusive };

struct IntegrabilityReport {
  std::vector<double> levels;
  std::vector<double> means;
  double last_difference = 0;
  bool cauchy = false;
  /// Cloud mass within the exclusion radius of I(f).
  double near_indeterminacy_mass = 0;
  IntegrabilityVerdict verdict = IntegrabilityVerdict::Inconclusive;
};

/// Weighted means of min(|log |Df||, M) for M = 2^k, k = 1..12.
IntegrabilityReport integrability_partial(const RationalSurfaceMap& f, const WeightedPointCloud& cloud,
                                          double exclusion_radius = kOrbitExclusionRadius, double tolerance = 1e-3);

struct HyperbolicityReport {
  double bound = 0;
  bool expanding = false;
  bool contracting = false;
  /// chi_plus - bound and -bound - chi_minus.
  double margin_plus = 0;
  double margin_minus = 0;
};

/// Compares the exponents with +-log(rho)/8, allowing two standard errors.
HyperbolicityReport hyperbolicity_verdict(const LyapunovEstimate& est, double rho);

std::string_view to_string(IntegrabilityVerdict v) noexcept;

}  // namespace bimero
