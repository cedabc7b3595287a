#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

#include "bimero/cohomology.hpp"
#include "bimero/corpus.hpp"
#include "bimero/error.hpp"

using namespace bimero;

namespace {

IntMatrix mat(std::initializer_list<std::initializer_list<long>> rows) {
  IntMatrix m(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (long v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

IntVector vec(std::initializer_list<long> v) {
  IntVector x(v.size());
  int i = 0;
  for (long a : v) x(i++) = a;
  return x;
}

CohomologyLattice rank3() {
  CohomologyLattice l;
  l.rank = 3;
  l.Q = mat({{1, 0, 0}, {0, -1, 0}, {0, 0, -1}});
  l.Mf = mat({{2, 1, 0}, {1, 1, 0}, {0, 0, 1}});
  l.Mfinv = mat({{2, -1, 0}, {-1, 1, 0}, {0, 0, 1}});
  l.beta_class = vec({1, 0, 0});
  l.curve_classes = {vec({1, 0, 0}), vec({1, -1, 0})};
  return l;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

const double kGoldenSquared = (3 + std::sqrt(5.0)) / 2;

}  // namespace

TEST(SpectralData, P2DegreeTwo) {
  const auto l = p2_lattice(2);
  const auto s = spectral_data(l);
  EXPECT_NEAR(s.rho, 2.0, 1e-14);
  EXPECT_NEAR(s.theta_plus(0), 1.0, 1e-14);
  EXPECT_NEAR(s.theta_minus(0), 1.0, 1e-14);
  EXPECT_NEAR(s.beta_scale, 1.0, 1e-14);
}

TEST(SpectralData, NoExpansion) {
  EXPECT_EQ(code_of([] { spectral_data(p2_lattice(1)); }), ErrorCode::NoExpansion);
}

TEST(SpectralData, Rank3AgainstDenseEigensolver) {
  const auto l = rank3();
  const auto s = spectral_data(l);
  Eigen::EigenSolver<Eigen::MatrixXd> es(l.Mf.cast<double>());
  double rho = 0;
  for (int i = 0; i < 3; ++i) rho = std::max(rho, std::abs(es.eigenvalues()(i)));
  EXPECT_NEAR(s.rho, rho, 1e-12);
  EXPECT_NEAR(s.rho, kGoldenSquared, 1e-12);
  EXPECT_NEAR(s.rho, s.rho_inverse, 1e-10);
  EXPECT_LT(s.eigen_residual, 1e-10);
  EXPECT_NEAR(s.residual_spectrum_bound, 1.0, 1e-12);
  for (double r : normalization_residuals(l, s)) EXPECT_LT(r, 1e-10);
  const auto mf = l.Mf.cast<double>();
  EXPECT_LT((mf * s.theta_plus - s.rho * s.theta_plus).norm(), 1e-10);
  EXPECT_LT((l.Mfinv.cast<double>() * s.theta_minus - s.rho * s.theta_minus).norm(), 1e-10);
}

TEST(SpectralData, RejectsNonSimpleDominant) {
  CohomologyLattice l = p2_lattice(2);
  l.rank = 2;
  l.Q = mat({{1, 0}, {0, -1}});
  l.Mf = mat({{2, 0}, {0, 2}});
  l.Mfinv = mat({{2, 0}, {0, 2}});
  l.beta_class = vec({1, 0});
  l.curve_classes = {};
  EXPECT_EQ(code_of([&] { spectral_data(l); }), ErrorCode::SimpleEigenvalueViolated);
}

TEST(SpectralData, RejectsBrokenLattice) {
  auto l = rank3();
  l.Mfinv = l.Mfinv.transpose().eval();
  l.Mfinv(0, 1) = 3;
  EXPECT_EQ(code_of([&] { spectral_data(l); }), ErrorCode::InvalidArgument);
  auto m = rank3();
  m.Q(1, 1) = 1;
  ASSERT_TRUE(m.violation().has_value());
}

TEST(CheckAdjoint, Examples) {
  EXPECT_TRUE(check_adjoint(p2_lattice(2)));
  CohomologyLattice l;
  l.rank = 2;
  l.Q = mat({{1, 0}, {0, -1}});
  l.Mf = mat({{2, 1}, {1, 1}});
  l.Mfinv = mat({{2, -1}, {-1, 1}});
  l.beta_class = vec({1, 0});
  EXPECT_TRUE(check_adjoint(l));
  // Mfinv = Q^{-1} Mf^T Q solved independently.
  const Eigen::MatrixXd solved = l.Q.cast<double>().inverse() * l.Mf.cast<double>().transpose() * l.Q.cast<double>();
  EXPECT_LT((solved - l.Mfinv.cast<double>()).norm(), 1e-15);
  auto bad = rank3();
  bad.Mfinv = bad.Mf.transpose();
  EXPECT_FALSE(check_adjoint(bad));
}

TEST(ConeK, Examples) {
  const auto l = p2_lattice(2);
  EXPECT_TRUE(cone_K_test(l, RealVector::Constant(1, 1.0)));
  EXPECT_FALSE(cone_K_test(l, RealVector::Constant(1, -1.0)));
  const auto r = rank3();
  EXPECT_TRUE(cone_K_test(r, spectral_data(r).theta_plus));
  CohomologyLattice empty = r;
  empty.curve_classes.clear();
  EXPECT_TRUE(cone_K_test(empty, -spectral_data(r).theta_plus));
}

TEST(ConeK, BundledMapsThetaPlus) {
  for (const auto& f : {corpus::henon(), corpus::lsigma()}) {
    const auto l = p2_lattice(f);
    ASSERT_TRUE(l.has_value()) << f.name();
    const auto s = spectral_data(*l);
    EXPECT_NEAR(s.rho, 2.0, 1e-12);
    EXPECT_TRUE(cone_K_test(*l, s.theta_plus));
    EXPECT_FALSE(l->curve_classes.empty());
  }
  EXPECT_FALSE(p2_lattice(corpus::cremona()).has_value());
}

TEST(ClassDecomposition, Examples) {
  const auto r = rank3();
  const auto s = spectral_data(r);
  const auto a = class_decomposition(r, s, s.theta_plus);
  EXPECT_NEAR(a.c, 1.0, 1e-12);
  EXPECT_LT(a.eta_perp.norm(), 1e-12);
  const auto b = class_decomposition(r, s, s.beta);
  EXPECT_NEAR(b.c, 1.0, 1e-12);
  EXPECT_LT((b.eta_perp - (s.beta - s.theta_plus)).norm(), 1e-12);
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(-9, 9);
  for (int k = 0; k < 20; ++k) {
    const RealVector eta = RealVector(Eigen::Vector3d(d(rng), d(rng), d(rng)));
    const auto e = class_decomposition(r, s, eta);
    EXPECT_LT((e.eta_perp + e.c * s.theta_plus - eta).norm(), 1e-10);
    EXPECT_NEAR(r.pairing(e.eta_perp, s.theta_minus), 0.0, 1e-10);
  }
}

TEST(ClassDecomposition, PerpGrowthBelowRho) {
  const auto r = rank3();
  const auto s = spectral_data(r);
  const RealVector eta = RealVector(Eigen::Vector3d(3, -2, 5));
  const auto e = class_decomposition(r, s, eta);
  const auto norms = iterate_norms(r, e.eta_perp, 20);
  // For every t in (residual bound, rho), |Mf^n eta_perp| <= C t^n with a fitted C.
  for (double t : {1.05, 1.5, 2.0, 2.5}) {
    double c = 0;
    for (int n = 0; n <= 20; ++n) c = std::max(c, norms[n] / std::pow(t, n));
    EXPECT_LT(c, 1e3 * (1 + eta.norm()));
    EXPECT_LT(norms[20], c * std::pow(t, 20) * (1 + 1e-12));
  }
  EXPECT_LT(norms[20], 1e-3 * std::pow(s.rho, 20));
}

TEST(P2Lattice, RhoMatchesDegreeGrowth) {
  const auto h = corpus::henon();
  const auto seq = degree_sequence(h, 5);
  const double limit = std::pow(seq.degrees.back(), 1.0 / seq.degrees.size());
  EXPECT_NEAR(spectral_data(*p2_lattice(h)).rho, limit, 1e-6);
}

TEST(P2Lattice, ImagesOfIndeterminacyArePositiveCurves) {
  for (const auto& f : {corpus::henon(), corpus::lsigma()}) {
    const auto s = spectral_data(*p2_lattice(f));
    for (const auto& p : f.indeterminacy()) {
      ASSERT_TRUE(p.exact.has_value());
      const auto img = apply(f, *p.exact);
      ASSERT_TRUE(std::holds_alternative<Blowup>(img));
      const auto& b = std::get<Blowup>(img);
      ASSERT_TRUE(b.curve_computed);
      EXPECT_GE(s.theta_plus(0) * b.curve.degree(), 1.0 - 1e-12);
    }
  }
}
