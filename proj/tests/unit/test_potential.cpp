#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "bimero/cohomology.hpp"
#include "bimero/corpus.hpp"
#include "bimero/error.hpp"
#include "bimero/potential.hpp"
#include "bimero/random.hpp"
#include "bimero/stability.hpp"

using namespace bimero;

namespace {

std::vector<double> default_radii() {
  std::vector<double> r;
  for (int k = 0; k < 8; ++k) r.push_back(1e-2 * std::pow(1e-3, k / 7.0));
  return r;
}

}  // namespace

TEST(Gamma, UnitaryOverrideVanishes) {
  const auto u = corpus::unitary();
  PotentialEvaluator ev(u, 1.0);
  auto rng = substream(11, 0);
  for (int i = 0; i < 20; ++i) {
    const auto p = uniform_point(rng);
    EXPECT_NEAR(ev.gamma(p), 0.0, 1e-15);
    EXPECT_NEAR(ev.green_partial(p, 17), 0.0, 1e-14);
    EXPECT_NEAR(ev.functional_check(p, 10).residual, 0.0, 1e-14);
  }
}

TEST(Gamma, HenonAtInfinity) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  const ProjectivePoint p(0, 1, 0);
  EXPECT_EQ(ev.gamma(p), 0.0);
  for (int n : {1, 5, 30}) EXPECT_EQ(ev.green_partial(p, n), 0.0);
  EXPECT_EQ(ev.functional_check(p, 25).residual, 0.0);
}

TEST(Gamma, MinusInfinityOnIndeterminacy) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  EXPECT_EQ(ev.gamma(ProjectivePoint(1, 0, 0)), -INFINITY);
  EXPECT_EQ(ev.green_partial(ProjectivePoint(1, 0, 0), 3), -INFINITY);
  double prev = 0;
  for (double r : {1e-2, 1e-4, 1e-6}) {
    const double g = ev.gamma(point_at_distance(ProjectivePoint(1, 0, 0), Vec3(0, 1, 1), r));
    EXPECT_LT(g, prev);
    prev = g;
  }
}

TEST(Gamma, NumericHitThrowsWithStep) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  const auto p = point_at_distance(ProjectivePoint(1, 0, 0), Vec3(0, 1, 0), 1e-6);
  try {
    ev.green_partial(p, 3);
    FAIL() << "expected OrbitHitIndeterminacy";
  } catch (const OrbitHitIndeterminacy& e) {
    EXPECT_EQ(e.step(), 0u);
  }
}

TEST(Gamma, RejectsBadRho) {
  EXPECT_THROW(PotentialEvaluator(corpus::henon(), 0.0), Error);
  EXPECT_THROW(PotentialEvaluator(RationalSurfaceMap("noinv", corpus::henon().forward()), 2.0, Direction::Backward),
               Error);
}

TEST(Green, TelescopingMatchesTermwise) {
  for (const auto& f : {corpus::henon(), corpus::lsigma()}) {
    PotentialEvaluator ev(f, f.degree());
    auto rng = substream(21, 0);
    for (int i = 0; i < 1000; ++i) {
      const auto p = uniform_point(rng);
      const double a = ev.green_partial(p, 40);
      const double b = ev.green_telescoped(p, 40);
      EXPECT_LE(std::abs(a - b), 1e-9 * std::max(1.0, std::abs(a))) << f.name();
    }
  }
}

TEST(Green, TelescopingSurvivesLongOrbits) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  const ProjectivePoint p(Complex(0.4, 0.2), Complex(3.0, -1.0), 1);
  const double a = ev.green_partial(p, 1500);
  const double b = ev.green_telescoped(p, 1500);
  ASSERT_TRUE(std::isfinite(b));
  EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::abs(a)));
}

TEST(Green, OriginAgainstLongOracle) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  const ProjectivePoint p(0, 0, 1);
  const double g30 = ev.green_partial(p, 30);
  const double g60 = ev.green_partial(p, 60);
  const double bound = std::pow(2.0, -30) * ev.orbit_gamma_max(p, 60) * 2.0;
  EXPECT_LE(std::abs(g30 - g60), bound);
}

TEST(Green, FunctionalEquationWithinTail) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  auto rng = substream(31, 0);
  for (int i = 0; i < 50; ++i) {
    const auto p = uniform_point(rng);
    const auto c = ev.functional_check(p, 25);
    EXPECT_LT(c.residual, 1e-7);
    EXPECT_LE(c.residual, c.tail_bound);
  }
}

TEST(Green, EssentiallyDecreasing) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  // gamma <= log |F|_max / rho on the unit sphere, and |F(z)| <= sum |coefficients|.
  const double sup_gamma = std::log(ev.map().numeric().coefficient_norm() * 3.0) / 2.0;
  auto rng = substream(41, 0);
  for (int i = 0; i < 200; ++i) {
    const auto p = uniform_point(rng);
    for (int n = 0; n < 20; ++n) {
      EXPECT_LE(ev.green_partial(p, n + 1), ev.green_partial(p, n) + std::pow(2.0, -n) * sup_gamma + 1e-12);
    }
  }
}

TEST(Green, GammaBoundedAbove) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  auto rng = substream(43, 0);
  double m = -INFINITY;
  for (int i = 0; i < 10000; ++i) m = std::max(m, ev.gamma(uniform_point(rng)));
  EXPECT_TRUE(std::isfinite(m));
  EXPECT_LT(m, std::log(ev.map().numeric().coefficient_norm() * 3.0) / 2.0);
}

TEST(Green, L1ConvergenceOnStableMaps) {
  for (const auto& f : {corpus::henon(), corpus::lsigma()}) {
    PotentialEvaluator ev(f, f.degree());
    const double gap = monte_carlo_l1([&](const ProjectivePoint& x) { return ev.green_partial(x, 25); },
                                      [&](const ProjectivePoint& x) { return ev.green_partial(x, 50); }, 1000, 5);
    EXPECT_LT(gap, 1e-4) << f.name();
  }
}

TEST(Green, VolumeIntegralGrowthBelowRho) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  std::vector<double> x, y;
  for (int j = 0; j <= 10; ++j) {
    auto rng = substream(51, 0);
    double sum = 0;
    for (int i = 0; i < 2000; ++i) {
      Vec3 z = uniform_point(rng).unit();
      for (int k = 0; k < j; ++k) {
        const Vec3 w = ev.map().numeric().evaluate(z);
        z = w / w.norm();
      }
      sum += std::abs(ev.gamma(z));
    }
    x.push_back(j);
    y.push_back(std::log(sum / 2000));
  }
  double mx = 0, my = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / y.size();
  for (std::size_t i = 0; i < x.size(); ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
  EXPECT_LT(std::exp(sxy / sxx), 2.0);
}

TEST(Green, BackwardIsInverseTriple) {
  const auto h = corpus::henon();
  PotentialEvaluator back(h, 2.0, Direction::Backward);
  PotentialEvaluator manual(h.inverted(), 2.0);
  auto rng = substream(61, 0);
  for (int i = 0; i < 20; ++i) {
    const auto p = uniform_point(rng);
    EXPECT_EQ(back.green_partial(p, 20), manual.green_partial(p, 20));
  }
  // g- is finite at I(f) exactly when the mirrored sum converges.
  EXPECT_TRUE(std::isfinite(back.green_partial(ProjectivePoint(1, 0, 0), 40)));
}

TEST(Green, FiniteOnInverseIndeterminacyIffConverged) {
  for (const auto& f : {corpus::cremona(), corpus::henon(), corpus::lsigma()}) {
    const double rho = f.degree();
    const auto report = condition3_sum(f, rho, 40);
    PotentialEvaluator ev(f, rho);
    bool finite = true;
    for (const auto& q : f.inverse_indeterminacy()) {
      try {
        finite = finite && std::isfinite(ev.green_partial(q.point, 40));
      } catch (const OrbitHitIndeterminacy&) {
        finite = false;
      }
    }
    EXPECT_EQ(finite, report.verdict == Verdict::Converged) << f.name();
  }
}

TEST(Singularity, HenonEnvelopeHoldsOnFreshSamples) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  const ProjectivePoint q(1, 0, 0);
  const auto fit = singularity_fit(ev, q, default_radii());
  EXPECT_GT(fit.A, 0);
  EXPECT_GT(fit.A_prime, 0);
  EXPECT_NEAR(fit.ls_slope, 0.5, 0.05);
  const auto fresh =
      shell_samples([&](const ProjectivePoint& x) { return ev.gamma(x); }, q, default_radii(), 125, 1001);
  ASSERT_EQ(fresh.size(), 1000u);
  for (const auto& s : fresh) EXPECT_TRUE(fit.contains(s.log_distance, s.value));
}

TEST(Singularity, CremonaWithRhoOverride) {
  PotentialEvaluator ev(corpus::cremona(), 2.0);
  for (const auto& q : {ProjectivePoint(1, 0, 0), ProjectivePoint(0, 1, 0), ProjectivePoint(0, 0, 1)}) {
    const auto fit = singularity_fit(ev, q, default_radii());
    EXPECT_GT(fit.A, 0);
    EXPECT_GT(fit.A_prime, 0);
  }
}

TEST(Singularity, Preconditions) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  EXPECT_THROW(singularity_fit(ev, ProjectivePoint(1, 0, 0), {1e-2, 1e-3}), Error);
  EXPECT_THROW(singularity_fit(ev, ProjectivePoint(1, 0, 0), {1e-2, 1e-3, 1e-8}), Error);
  EXPECT_THROW(singularity_fit(ev, ProjectivePoint(1, 0, 0), {1e-3, 1e-2, 1e-4}), Error);
  EXPECT_THROW(singularity_fit(ev, ProjectivePoint(0, 0, 1), default_radii()), Error);
}

TEST(Lelong, AnalyticLogModel) {
  const Complex a0(0.3, -0.2), a1(-0.5, 0.1);
  const ProjectivePoint center(a0, a1, 1);
  auto u = [&](const ProjectivePoint& x) {
    const Vec3& v = x.unit();
    return std::log(std::hypot(std::abs(v(0) / v(2) - a0), std::abs(v(1) / v(2) - a1)));
  };
  EXPECT_NEAR(lelong_estimate(shell_means(u, center)), 1.0, 0.05);
}

TEST(Lelong, GenericAndIndeterminatePoints) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  auto rng = substream(71, 0);
  for (int i = 0; i < 3; ++i) {
    const auto x = uniform_point(rng);
    const double nu = lelong_estimate(shell_means([&](const ProjectivePoint& y) { return ev.green_partial(y, 20); }, x));
    EXPECT_LT(nu, 0.01);
  }
  double first = -1;
  for (int n : {10, 20, 30}) {
    const double nu = lelong_estimate(
        shell_means([&](const ProjectivePoint& y) { return ev.green_partial(y, n); }, ProjectivePoint(1, 0, 0)));
    EXPECT_GE(nu, 0.1);
    if (first < 0) first = nu;
    EXPECT_NEAR(nu, first, 0.01);
  }
}

TEST(Lelong, ClampsAndValidates) {
  EXPECT_EQ(lelong_estimate({{1e-2, -1}, {1e-3, 0}, {1e-4, 1}, {1e-5, 2}}), 0.0);
  EXPECT_THROW(lelong_estimate({{1e-2, 0}, {1e-3, 0}, {1e-4, 0}}), Error);
}

TEST(GnEta, ReducesToGreenPartialOnP2) {
  const auto h = corpus::henon();
  const auto lattice = p2_lattice(2);
  const auto pots = p2_class_potentials(h);
  PotentialEvaluator ev(h, 2.0);
  RealVector eta(1);
  eta << 1.0;
  auto rng = substream(81, 0);
  for (int i = 0; i < 20; ++i) {
    const auto p = uniform_point(rng);
    for (int n : {1, 7, 25}) {
      EXPECT_NEAR(gn_eta(lattice, 2.0, pots, eta, nullptr, p, n), ev.green_partial(p, n), 1e-12);
      EXPECT_NEAR(gn_eta(lattice, 2.0, pots, 3.0 * eta, nullptr, p, n), 3.0 * ev.green_partial(p, n), 1e-12);
    }
  }
}

TEST(GnEta, OrthogonalClassDecaysInL1) {
  CohomologyLattice L;
  L.rank = 3;
  L.Q = IntMatrix::Zero(3, 3);
  L.Q.diagonal() << 1, -1, -1;
  L.Mf.resize(3, 3);
  L.Mf << 2, 1, 0, 1, 1, 0, 0, 0, 1;
  L.Mfinv.resize(3, 3);
  L.Mfinv << 2, -1, 0, -1, 1, 0, 0, 0, 1;
  L.beta_class = IntVector::Unit(3, 0);
  const auto sd = spectral_data(L);
  const auto h = corpus::henon();
  ClassPotentials pots;
  pots.step = p2_class_potentials(h).step;
  pots.gamma = [](int k, const Vec3& z) { return std::norm(z(k)) - 1.0 / 3.0; };
  // eta spans the theta- orthogonal complement.
  const Eigen::MatrixXd Q = L.Q.cast<double>();
  const RealVector w = Q * sd.theta_minus;
  RealVector eta = RealVector::Unit(3, 2) - (w(2) / w(0)) * RealVector::Unit(3, 0);
  ASSERT_NEAR(eta.dot(w), 0.0, 1e-14);
  auto p_eta = [](const Vec3& z) { return std::norm(z(1)) - std::norm(z(2)); };
  std::vector<double> l1;
  for (int n : {2, 4, 8, 16}) {
    l1.push_back(monte_carlo_l1(
        [&](const ProjectivePoint& x) { return gn_eta(L, sd.rho, pots, eta, p_eta, x, n); }, nullptr, 500, 9));
  }
  for (std::size_t i = 1; i < l1.size(); ++i) EXPECT_LT(l1[i], l1[i - 1]);
  EXPECT_LT(l1.back(), 16 * std::pow(sd.rho, -16) * 10);
}

TEST(Export, SliceAndPgm) {
  PotentialEvaluator ev(corpus::henon(), 2.0);
  ChartSlice slice;
  slice.resolution = 16;
  const auto values = sample_slice(slice, [&](const Vec3& z) { return ev.green_partial(ProjectivePoint(z), 20); });
  ASSERT_EQ(values.size(), 256u);
  const auto path = (std::filesystem::temp_directory_path() / "bimero_test_slice.pgm").string();
  const auto s = write_pgm(path, values, 16, 16);
  EXPECT_EQ(s.non_finite, 0u);
  std::ifstream in(path, std::ios::binary);
  std::string magic;
  int w = 0, hgt = 0, maxv = 0;
  in >> magic >> w >> hgt >> maxv;
  in.get();
  EXPECT_EQ(magic, "P5");
  EXPECT_EQ(w, 16);
  EXPECT_EQ(maxv, 65535);
  unsigned char b[2];
  in.read(reinterpret_cast<char*>(b), 2);
  const double v0 = s.offset + s.scale * (b[0] * 256 + b[1]);
  EXPECT_NEAR(v0, values[0], s.scale);
  std::remove(path.c_str());
}
