#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bimero/surface_map.hpp"

namespace bimero {

enum class StepKind { Point, Indeterminate, Collapsed };

struct OrbitStep {
  int n = 0;
  /// Collapsed marks a point reached by contracting a critical curve.
  StepKind kind = StepKind::Point;
  ProjectivePoint point;
  std::optional<ExactPoint> exact;
  /// Chordal distance to the target set (I(f) for forward orbits); NaN after an
  /// indeterminate encounter.
  double distance = 0.0;
  /// Chordal error radius of numeric continuation (0 for exact points).
  double error_radius = 0.0;
};

struct Orbit {
  IndeterminacyPoint source;
  std::vector<OrbitStep> steps;
  /// Step index at which exact arithmetic was abandoned, if it was.
  std::optional<int> numeric_from;
  /// First step lying in the target set, if any.
  std::optional<int> hit;
};

struct OrbitTable {
  std::vector<Orbit> orbits;
};

struct StabilityOptions {
  double eps = kIndeterminacyTolerance;
  /// Exact orbit points larger than this (bits per integer part) continue numerically.
  std::size_t max_point_bits = 4096;
};

/// Orbits of the points of I(f^{-1}) under f for N steps, with distances to I(f).
/// Pass f.inverted() for the backward orbits of I(f).
OrbitTable exceptional_orbits(const RationalSurfaceMap& f, int n, const StabilityOptions& options = {});

struct Condition1Verdict {
  bool holds = true;
  /// Smallest i + j with f^i(I(f^{-1})) meeting f^{-j}(I(f)) (when !holds).
  int fails_at = -1;
  std::optional<ProjectivePoint> witness;
  int checked_through = 0;
  std::string to_string() const;
};

Condition1Verdict check_condition1(const RationalSurfaceMap& f, int n, const StabilityOptions& options = {});

enum class Verdict { Converged, Diverging, Inconclusive };
std::string to_string(Verdict v);

struct Condition3Report {
  /// S_0..S_N (-infinity from the first indeterminate hit on).
  std::vector<double> partial_sums;
  double tail_bound = 0.0;
  Verdict verdict = Verdict::Inconclusive;
  std::optional<int> hit_step;
  std::optional<int> numeric_from;
  double rho = 1.0;
};

/// Verdict from the per-step logarithms of the set distances (log d_n <= 0,
/// -infinity for a hit). `straddles` marks numeric steps whose error radius
/// makes the comparison with eps undecidable.
Condition3Report summarize_condition3(const std::vector<double>& log_distances, double rho,
                                      const std::vector<bool>& straddles = {});

/// S_N = sum_{n<=N} rho^{-n} log dist(f^n I(f^{-1}), I(f)).
Condition3Report condition3_sum(const RationalSurfaceMap& f, double rho, int n, const StabilityOptions& options = {});
/// Mirror driven by f^{-1}: sum_j rho^{-j} log dist(f^{-j} I(f), I(f^{-1})).
Condition3Report condition3_inverse_sum(const RationalSurfaceMap& f, double rho, int n,
                                    const StabilityOptions& options = {});
/// Converged for one of the two sums and Diverging for the other.
bool sums_disagree(const Condition3Report& c3, const Condition3Report& inverse);

/// Minimum chordal distance between the forward orbit set of I(f^{-1}) and the
/// backward orbit set of I(f) (both truncated at N); +infinity if either is empty.
double separation_diagnostic(const RationalSurfaceMap& f, int n, const StabilityOptions& options = {});

}  // namespace bimero
