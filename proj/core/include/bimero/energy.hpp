#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "bimero/projective.hpp"
#include "bimero/surface_map.hpp"

namespace bimero {

/// Real function on a chart of C^2 with its first derivatives (d/dz1, d/dz2)
/// and, when available, the Levi matrix [d^2/dz_j dzbar_k].
struct SmoothFunction {
  std::function<double(const Vec2&)> value;
  std::function<Vec2(const Vec2&)> gradient;
  std::function<Mat2(const Vec2&)> levi;
};

/// Real (1,1)-form i sum a_jk dz_j ^ dzbar_k given by its Hermitian matrix a.
using FormField = std::function<Mat2(const Vec2&)>;

/// Box of C^2 = R^4 in the affine chart `chart` (that homogeneous coordinate set
/// to 1), centred at the chart coordinates of `center`, sampled at cell
/// midpoints with `resolution` cells per real axis.
struct GridChart {
  ProjectivePoint center;
  int chart = 2;
  double half_width = 1.0;
  int resolution = 24;

  /// Throws InvalidArgument (resolution < 8, bad index, center on the line at
  /// infinity of the chart).
  void validate() const;
  Vec2 origin() const;
  double spacing() const { return 2 * half_width / resolution; }
  double cell_volume() const;
  std::size_t size() const;
  /// Midpoint of cell (i0, i1, i2, i3) = (Re z1, Im z1, Re z2, Im z2) indices.
  Vec2 node(int i0, int i1, int i2, int i3) const;
  /// Homogeneous unit vector of a chart point.
  Vec3 lift(const Vec2& w) const;
};

/// Chart coordinates of a homogeneous vector in chart `chart` (nullopt on its line at infinity).
std::optional<Vec2> to_chart(const Vec3& z, int chart, double tol = 1e-300);

/// Pointwise samples of a form on a grid.
struct DiscreteForm11 {
  GridChart grid;
  std::vector<Mat2> values;

  static DiscreteForm11 sample(const FormField& t, const GridChart& grid);
  double min_eigenvalue() const;
  FormField field() const;
};

/// Density of alpha ^ beta against Lebesgue measure for (1,1)-forms with matrices a, b.
double wedge_density(const Mat2& a, const Mat2& b);
/// Matrix of the (1,1) part of d phi ^ d^c psi, with d^c = (i/2pi)(dbar - d).
Mat2 gradient_form(const Vec2& g_phi, const Vec2& g_psi);

/// E_T(phi, psi) = int d phi ^ d^c psi ^ T by the midpoint rule. Throws
/// NonPositiveT if some node matrix has an eigenvalue below -1e-12.
double energy(const SmoothFunction& phi, const SmoothFunction& psi, const FormField& t, const GridChart& grid);
double energy(const SmoothFunction& phi, const FormField& t, const GridChart& grid);
double energy(const SmoothFunction& phi, const DiscreteForm11& t);
/// int f beta ^ T with beta the Euclidean Kahler form.
double mass_integral(const std::function<double(const Vec2&)>& f, const FormField& t, const GridChart& grid);

/// u_j = m(u + j) - j with m the convolution of max(0, t) against a biweight
/// kernel of half-width delta (convex, C^3, m(t) = max(0, t) for |t| >= delta).
SmoothFunction regularize(const SmoothFunction& u, double j, double delta);
double regularization_profile(double t, double delta);

struct ComparisonResiduals {
  /// E(u,v) - E(v,v) + c int (v - u) beta ^ T
  double lower = 0;
  /// c int (v - u) beta ^ T - (E(u,v) - E(u,u))
  double upper = 0;
};
/// Both inequalities of the energy comparison for v >= u with dd^c u, dd^c v >= -c beta.
/// Premises are checked on the grid (min eigenvalue of dd^c + c beta >= -1e-10,
/// v >= u); throws PremiseViolated otherwise. Requires levi on u and v.
ComparisonResiduals energy_comparison(const SmoothFunction& u, const SmoothFunction& v, double c, const FormField& t,
                            const GridChart& grid);
/// Smallest c >= 0 with dd^c w + c beta >= 0 at every node.
double fit_psh_constant(const SmoothFunction& w, const GridChart& grid);

/// u with isolated logarithmic poles, integrated in log-polar shells around
/// each pole and on the grid elsewhere (smooth partition of unity).
struct SingularFunction {
  SmoothFunction u;
  std::vector<Vec2> poles;
};

struct ShellQuadrature {
  double inner_radius = 1e-9;
  double outer_radius = 0.5;
  int radial = 160;
  int polar = 12;
  int azimuthal = 16;
};

/// int d phi ^ d^c psi ^ T with log-polar shells around the poles of u.
double energy(const SingularFunction& phi, const SingularFunction& psi, const FormField& t, const GridChart& grid,
              const ShellQuadrature& shells = {});

struct CauchyReport {
  std::vector<double> levels;
  /// |u_j - u_k|_T for all level pairs.
  std::vector<std::vector<double>> differences;
  /// |u_j|_T.
  std::vector<double> norms;
  /// Geometric ratio fitted to the consecutive differences over the tail half.
  double tail_ratio = 0;
  bool consecutive_decreasing = false;
  /// Differences decay (tail ratio < 0.75 and monotone), or vanish.
  bool cauchy = false;
};
CauchyReport cauchy_diagnostic(const SingularFunction& u, const FormField& t, const GridChart& grid,
                               const std::vector<double>& levels, double delta = 0.25,
                               const ShellQuadrature& shells = {});

/// Holomorphic chart expression of f: source chart coordinates to target chart
/// coordinates, with its complex Jacobian.
class ChartMap {
 public:
  ChartMap(const NumericMap& lift, int source_chart, int target_chart);
  /// False where the image leaves the target chart or f is indeterminate.
  bool evaluate(const Vec2& x, Vec2& w, Mat2& jacobian) const;

 private:
  NumericMap lift_;
  int source_;
  int target_;
};

struct PushforwardReport {
  /// |u|_{f_* T}: integral over the target grid with (f^{-1})^* T.
  double pushed = 0;
  /// |f^* u|_T: integral over the source grid of d(u o f) ^ d^c(u o f) ^ T.
  double pulled = 0;
  double relative = 0;
};
/// Change-of-variables check of the energy under f. The map must be
/// biholomorphic between the charts where the integrands live; throws
/// ChartMeetsExceptionalSet when a needed node lies within one cell of a
/// critical curve or of the preimage of the target line at infinity.
/// Nodes where the gradient of u vanishes are skipped on the target side.
PushforwardReport pushforward_energy_check(const SmoothFunction& u, const RationalSurfaceMap& f, const FormField& t,
                                           const GridChart& source, const GridChart& target);
/// Same for u with poles (target chart coordinates); the poles and their
/// preimages get log-polar shells on the respective side.
PushforwardReport pushforward_energy_check(const SingularFunction& u, const RationalSurfaceMap& f,
                                           const FormField& t, const GridChart& source, const GridChart& target,
                                           const ShellQuadrature& shells);

// Test data.
namespace functions {

FormField euclidean_form();
FormField constant_form(const Mat2& a);
/// dd^c (1/2) log(|z - a|^2 + eps^2); eps = 0 gives the singular current off a.
FormField ddc_log_form(const Vec2& a, double eps);

SmoothFunction constant(double c);
/// Re z_k (k = 0, 1).
SmoothFunction real_coordinate(int k);
/// log |z - a|.
SmoothFunction log_distance(const Vec2& a);
/// chi(|z - s|) log|z - s| with chi = 1 on r <= radius / 2 and 0 for r >= radius.
SmoothFunction cutoff_log(const Vec2& s, double radius);
/// (1 - |z - s|^2 / radius^2)^4 on the ball, 0 outside.
SmoothFunction bump(const Vec2& s, double radius);
SmoothFunction sum(const SmoothFunction& a, const SmoothFunction& b, double scale_b = 1.0);

/// sum_m a_m cos(2 pi k_m . x) + b_m sin(2 pi k_m . x) on R^4 = C^2.
struct TrigMode {
  std::array<int, 4> k{};
  double a = 0, b = 0;
};
SmoothFunction trig_polynomial(std::vector<TrigMode> modes, double constant = 0.0);

}  // namespace functions
}  // namespace bimero
