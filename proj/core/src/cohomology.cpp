#include "bimero/cohomology.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

#include "bimero/error.hpp"

namespace bimero {
namespace {

// Unit null vector of (m - lambda I) with one refinement sweep.
RealVector eigenvector(const Eigen::MatrixXd& m, double lambda) {
  const Eigen::MatrixXd a = m - lambda * Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  RealVector v = svd.matrixV().col(m.cols() - 1);
  for (int it = 0; it < 3; ++it) {
    const Eigen::MatrixXd shifted = a - 1e-14 * Eigen::MatrixXd::Identity(m.rows(), m.cols());
    const RealVector w = shifted.fullPivLu().solve(v);
    if (!w.allFinite() || w.norm() == 0) break;
    v = w.normalized();
  }
  return v;
}

struct Spectrum {
  double rho;
  double second;
};

Spectrum spectrum(const Eigen::MatrixXd& m) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  std::vector<std::complex<double>> ev(es.eigenvalues().data(), es.eigenvalues().data() + m.rows());
  std::sort(ev.begin(), ev.end(), [](auto a, auto b) { return std::abs(a) > std::abs(b); });
  Spectrum s{std::abs(ev[0]), ev.size() > 1 ? std::abs(ev[1]) : 0.0};
  if (std::abs(ev[0].imag()) > 1e-9 || ev[0].real() <= 0) s.second = s.rho;
  return s;
}

}  // namespace

std::optional<std::string> CohomologyLattice::violation() const {
  const long r = rank;
  if (r < 1) return "rank must be positive";
  if (Q.rows() != r || Q.cols() != r || Mf.rows() != r || Mf.cols() != r || Mfinv.rows() != r ||
      Mfinv.cols() != r || beta_class.size() != r) {
    return "matrix or vector shape does not match the rank";
  }
  for (const auto& v : curve_classes) {
    if (v.size() != r) return "curve class has the wrong length";
  }
  if (Q != Q.transpose()) return "intersection form is not symmetric";
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Q.cast<double>());
  const auto& ev = es.eigenvalues();
  const long positive = (ev.array() > 1e-9).count();
  const long negative = (ev.array() < -1e-9).count();
  if (positive != 1 || negative != r - 1) return "intersection form does not have signature (1, rank-1)";
  if (!check_adjoint(*this)) return "Mf^T Q != Q Mfinv";
  if ((beta_class.transpose() * Q * beta_class)(0) <= 0) return "beta class has nonpositive self-intersection";
  return std::nullopt;
}

double CohomologyLattice::pairing(const RealVector& a, const RealVector& b) const {
  return a.dot(Q.cast<double>() * b);
}

CohomologyLattice p2_lattice(int degree, std::vector<int> curve_degrees) {
  CohomologyLattice l;
  l.rank = 1;
  l.Q = IntMatrix::Constant(1, 1, 1);
  l.Mf = IntMatrix::Constant(1, 1, degree);
  l.Mfinv = IntMatrix::Constant(1, 1, degree);
  l.beta_class = IntVector::Constant(1, 1);
  for (int d : curve_degrees) l.curve_classes.push_back(IntVector::Constant(1, d));
  return l;
}

std::optional<CohomologyLattice> p2_lattice(const RationalSurfaceMap& f, int n) {
  if (!degree_sequence(f, n).stable) return std::nullopt;
  std::vector<int> curves;
  if (f.has_inverse()) {
    for (const auto& c : f.inverse_critical_factors()) curves.push_back(c.factor.degree());
  }
  return p2_lattice(f.degree(), curves);
}

bool check_adjoint(const CohomologyLattice& l) {
  if (l.Mf.rows() != l.Q.rows() || l.Mfinv.rows() != l.Q.rows()) return false;
  return IntMatrix(l.Mf.transpose() * l.Q) == IntMatrix(l.Q * l.Mfinv);
}

SpectralData spectral_data(const CohomologyLattice& l) {
  if (auto v = l.violation()) throw Error(ErrorCode::InvalidArgument, "invalid lattice: " + *v);
  const Eigen::MatrixXd mf = l.Mf.cast<double>();
  const Eigen::MatrixXd mi = l.Mfinv.cast<double>();
  const Spectrum sf = spectrum(mf);
  const Spectrum si = spectrum(mi);
  if (sf.rho <= 1 + 1e-12) throw Error(ErrorCode::NoExpansion, "spectral radius of f* is not larger than 1");
  if (sf.second >= sf.rho - 1e-9 || si.second >= si.rho - 1e-9) {
    throw Error(ErrorCode::SimpleEigenvalueViolated, "dominant eigenvalue is not simple and real");
  }
  SpectralData s;
  s.rho = sf.rho;
  s.rho_inverse = si.rho;
  s.residual_spectrum_bound = sf.second;
  RealVector u = eigenvector(mf, sf.rho);
  RealVector v = eigenvector(mi, si.rho);
  const RealVector w = l.beta_class.cast<double>();
  if (l.pairing(u, w) < 0) u = -u;
  if (l.pairing(v, w) < 0) v = -v;
  const double uv = l.pairing(u, v);
  const double uw = l.pairing(u, w);
  const double vw = l.pairing(v, w);
  if (std::abs(uv) < 1e-12 || std::abs(uw) < 1e-12 || std::abs(vw) < 1e-12 || uv / (uw * vw) <= 0) {
    throw Error(ErrorCode::DegenerateNormalization, "theta classes cannot be normalized against beta");
  }
  s.beta_scale = std::sqrt(uv / (uw * vw));
  s.theta_plus = u / (s.beta_scale * uw);
  s.theta_minus = v / (s.beta_scale * vw);
  s.beta = s.beta_scale * w;
  s.eigen_residual = std::max((mf * s.theta_plus - s.rho * s.theta_plus).norm() / s.theta_plus.norm(),
                              (mi * s.theta_minus - s.rho * s.theta_minus).norm() / s.theta_minus.norm());
  return s;
}

bool cone_K_test(const CohomologyLattice& l, const RealVector& eta) {
  return std::all_of(l.curve_classes.begin(), l.curve_classes.end(),
                     [&](const IntVector& v) { return l.pairing(eta, v.cast<double>()) >= -1e-12; });
}

ClassDecomposition class_decomposition(const CohomologyLattice& l, const SpectralData& s, const RealVector& eta) {
  ClassDecomposition d;
  d.c = l.pairing(eta, s.theta_minus);
  d.eta_perp = eta - d.c * s.theta_plus;
  return d;
}

std::vector<double> iterate_norms(const CohomologyLattice& l, const RealVector& v, int n_max) {
  const Eigen::MatrixXd mf = l.Mf.cast<double>();
  std::vector<double> out;
  RealVector x = v;
  for (int n = 0; n <= n_max; ++n) {
    out.push_back(x.norm());
    x = mf * x;
  }
  return out;
}

std::array<double, 3> normalization_residuals(const CohomologyLattice& l, const SpectralData& s) {
  return {std::abs(l.pairing(s.theta_plus, s.theta_minus) - 1), std::abs(l.pairing(s.theta_plus, s.beta) - 1),
          std::abs(l.pairing(s.theta_minus, s.beta) - 1)};
}

}  // namespace bimero
