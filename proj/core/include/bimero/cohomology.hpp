#pragma once

#include <Eigen/Core>

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "bimero/surface_map.hpp"

namespace bimero {

using IntMatrix = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;
using IntVector = Eigen::Matrix<long, Eigen::Dynamic, 1>;
using RealVector = Eigen::VectorXd;

/// Integer model of H^{1,1}: intersection form Q, the matrices of f* and
/// (f^{-1})*, classes of the curves in C(f^{-1}) and a Kahler class.
struct CohomologyLattice {
  int rank = 1;
  IntMatrix Q;
  IntMatrix Mf;
  IntMatrix Mfinv;
  std::vector<IntVector> curve_classes;
  IntVector beta_class;

  /// Description of the first violated invariant (shape, symmetry, Hodge
  /// signature (1, rank-1), adjointness, positivity of beta), or nullopt.
  std::optional<std::string> violation() const;
  double pairing(const RealVector& a, const RealVector& b) const;
};

/// Rank-one lattice of P^2 for a map of the given degree.
CohomologyLattice p2_lattice(int degree, std::vector<int> curve_degrees = {1});
/// Lattice of P^2 for f when its degree sequence is multiplicative through n
/// iterates; curve classes are the degrees of the factors of C(f^{-1}).
std::optional<CohomologyLattice> p2_lattice(const RationalSurfaceMap& f, int n = 6);

struct SpectralData {
  double rho = 1.0;
  RealVector theta_plus;
  RealVector theta_minus;
  /// Scale s with beta = s * beta_class in the normalization.
  double beta_scale = 1.0;
  RealVector beta;
  double residual_spectrum_bound = 0.0;
  /// max of |Mf theta+ - rho theta+| / |theta+| and the theta- analogue.
  double eigen_residual = 0.0;
  /// Spectral radius of Mfinv.
  double rho_inverse = 1.0;
};

/// Throws InvalidArgument (invariants), NoExpansion, SimpleEigenvalueViolated,
/// DegenerateNormalization.
SpectralData spectral_data(const CohomologyLattice& lattice);

/// Mf^T Q == Q Mfinv exactly.
bool check_adjoint(const CohomologyLattice& lattice);

/// eta . Q . v >= -1e-12 for every stored curve class (vacuously true).
bool cone_K_test(const CohomologyLattice& lattice, const RealVector& eta);

struct ClassDecomposition {
  RealVector eta_perp;
  double c = 0.0;
};

/// eta = eta_perp + c theta+ with c = <eta, theta->.
ClassDecomposition class_decomposition(const CohomologyLattice& lattice, const SpectralData& spectral,
                                       const RealVector& eta);

/// Euclidean norms |Mf^n v| for n = 0..n_max.
std::vector<double> iterate_norms(const CohomologyLattice& lattice, const RealVector& v, int n_max);

/// Residuals of the three equalities in the normalization.
std::array<double, 3> normalization_residuals(const CohomologyLattice& lattice, const SpectralData& spectral);

}  // namespace bimero
