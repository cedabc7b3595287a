#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bimero/numeric_polynomial.hpp"
#include "bimero/polynomial.hpp"
#include "bimero/projective.hpp"

namespace bimero {

using PolyTriple = std::array<HomogeneousPolynomial, 3>;

/// Default cap on coefficient size during exact composition (bits per integer part).
inline constexpr std::size_t kDefaultBitBound = std::size_t{1} << 16;
/// Default numeric indeterminacy tolerance on unit representatives.
inline constexpr double kIndeterminacyTolerance = 1e-9;

struct IndeterminacyPoint {
  ProjectivePoint point;
  std::optional<ExactPoint> exact;
  /// max |F_i| / coefficient norm at the unit representative (0 for exact points).
  double residual = 0.0;
};

struct CriticalFactor {
  HomogeneousPolynomial factor;
  int multiplicity = 1;
};

struct ImagePoint {
  ProjectivePoint point;
  std::optional<ExactPoint> exact;
};

struct Blowup {
  HomogeneousPolynomial curve;
  /// False when the image curve could not be determined (always for numeric input).
  bool curve_computed = false;
};

struct Collapsed {
  ImagePoint image;
  HomogeneousPolynomial source_curve;
};

using MapImage = std::variant<ImagePoint, Blowup, Collapsed>;

struct DegreeSequence {
  std::vector<int> degrees;
  bool stable = true;
};

/// Birational self-map of P^2 given by three coprime homogeneous polynomials
/// of a common degree, optionally with an inverse triple. Immutable; derived
/// data (indeterminacy and critical sets) is computed once on first use and
/// shared between copies.
class RationalSurfaceMap {
 public:
  /// Throws InvalidArgument for mismatched degrees, zero components or degree 0,
  /// and PositiveDimensionalLocus if the forward (or inverse) components share a factor.
  RationalSurfaceMap(std::string name, PolyTriple forward, std::optional<PolyTriple> inverse = std::nullopt);

  const std::string& name() const noexcept { return name_; }
  int degree() const noexcept { return forward_[0].degree(); }
  const PolyTriple& forward() const noexcept { return forward_; }
  const std::optional<PolyTriple>& inverse() const noexcept { return inverse_; }
  bool has_inverse() const noexcept { return inverse_.has_value(); }

  const NumericMap& numeric() const noexcept { return numeric_; }
  /// Throws MissingInverse.
  const NumericMap& numeric_inverse() const;

  /// The map with forward and inverse swapped. Throws MissingInverse.
  RationalSurfaceMap inverted() const;

  const std::vector<IndeterminacyPoint>& indeterminacy() const;
  /// I(f^{-1}); throws MissingInverse.
  const std::vector<IndeterminacyPoint>& inverse_indeterminacy() const;
  const std::vector<CriticalFactor>& critical_factors() const;
  /// Critical factors of the inverse; throws MissingInverse.
  const std::vector<CriticalFactor>& inverse_critical_factors() const;

  std::size_t max_coefficient_bits() const;

 private:
  struct Cache;
  std::string name_;
  PolyTriple forward_;
  std::optional<PolyTriple> inverse_;
  NumericMap numeric_;
  std::optional<NumericMap> numeric_inverse_;
  std::shared_ptr<Cache> cache_;
};

RationalSurfaceMap identity_map();

/// Image of an exact point: Blowup on I(f) (with the image curve when it can be
/// determined), Collapsed on a critical curve, ImagePoint otherwise.
MapImage apply(const RationalSurfaceMap& f, const ExactPoint& p);
/// Numeric image; Blowup (without curve) when |F(p)| <= eps * coefficient norm.
MapImage apply(const RationalSurfaceMap& f, const ProjectivePoint& p, double eps = kIndeterminacyTolerance);

/// Reduced f o g on triples: substitution followed by division by the gcd.
/// Throws CoefficientOverflow (completed = 0) if a coefficient exceeds max_bits.
PolyTriple compose(const PolyTriple& f, const PolyTriple& g, std::size_t max_bits = kDefaultBitBound);
/// f o g, with inverse g^{-1} o f^{-1} when both inverses are present.
RationalSurfaceMap compose(const RationalSurfaceMap& f, const RationalSurfaceMap& g,
                           std::size_t max_bits = kDefaultBitBound);

/// Divides the three components by their common gcd.
PolyTriple reduce(const PolyTriple& t);
/// True iff the triple equals lambda * (x, y, z) for a nonzero scalar lambda.
bool is_identity(const PolyTriple& t);

/// True iff the composition with the stored inverse reduces to the identity.
/// Throws MissingInverse.
bool verify_inverse(const RationalSurfaceMap& f);

/// Degrees of the reduced iterates f^1..f^N. Throws CoefficientOverflow with
/// the last completed iterate.
DegreeSequence degree_sequence(const RationalSurfaceMap& f, int n, std::size_t max_bits = kDefaultBitBound);

/// Common zeros of the three components. Throws PositiveDimensionalLocus.
std::vector<IndeterminacyPoint> indeterminacy_set(const PolyTriple& f);
const std::vector<IndeterminacyPoint>& indeterminacy_set(const RationalSurfaceMap& f);

/// Jacobian determinant of the homogeneous lift (exact).
HomogeneousPolynomial jacobian_determinant(const PolyTriple& f);
/// Squarefree factorization of the Jacobian determinant (empty for linear maps).
std::vector<CriticalFactor> critical_set(const PolyTriple& f);
const std::vector<CriticalFactor>& critical_set(const RationalSurfaceMap& f);

/// Chordal distance from p to a finite point set (1 for an empty set, the diameter).
double distance_to_set(const ProjectivePoint& p, const std::vector<IndeterminacyPoint>& set);

/// Differential of the induced map at the unit vector z, expressed in the
/// orthonormal frames of z-perp and F(z)-perp (Fubini-Study tangent frames).
/// `image` receives F(z) normalized; `lift_norm` receives |F(z)|.
Mat2 tangent_map(const NumericMap& f, const Vec3& z, Vec3* image = nullptr, double* lift_norm = nullptr);

/// Operator norm of Df at p. Throws TooCloseToIndeterminacy when dist(p, I(f)) <= eps.
double derivative_norm(const RationalSurfaceMap& f, const ProjectivePoint& p, double eps = kIndeterminacyTolerance);

/// Norm of the second derivative of f at p in the dominant affine charts of p
/// and f(p). Throws TooCloseToIndeterminacy.
double second_derivative_norm(const RationalSurfaceMap& f, const ProjectivePoint& p,
                              double eps = kIndeterminacyTolerance);

}  // namespace bimero
