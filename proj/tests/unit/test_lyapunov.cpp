#include <gtest/gtest.h>

#include <cmath>

#include "bimero/corpus.hpp"
#include "bimero/error.hpp"
#include "bimero/lyapunov.hpp"
#include "bimero/random.hpp"

using namespace bimero;

namespace {

const WeightedPointCloud& henon_cloud() {
  static const auto c = saddle_cloud(corpus::henon(), 6);
  return c;
}

WeightedPointCloud cloud_of(const std::vector<ProjectivePoint>& pts) {
  WeightedPointCloud c;
  c.provenance = CloudProvenance::Intersections;
  for (const auto& p : pts) c.points.push_back({p});
  c.set_uniform_weights();
  return c;
}

WeightedPointCloud random_cloud(int count, std::uint64_t seed) {
  auto rng = substream(seed, 0);
  std::vector<ProjectivePoint> pts;
  for (int i = 0; i < count; ++i) pts.push_back(uniform_point(rng));
  return cloud_of(pts);
}

}  // namespace

TEST(Cocycle, DiagonalIsExact) {
  const auto d = corpus::diagonal();
  const auto est = cocycle_exponents(d, saddle_periodic_points(d, 1));
  EXPECT_NEAR(est.chi_plus, std::log(2.0), 1e-10);
  EXPECT_NEAR(est.chi_minus, -std::log(2.0), 1e-10);
  EXPECT_EQ(est.excluded, 0u);
}

TEST(Cocycle, UnitaryIsZero) {
  const auto est = cocycle_exponents(corpus::unitary(), random_cloud(50, 5));
  EXPECT_NEAR(est.chi_plus, 0.0, 1e-12);
  EXPECT_NEAR(est.chi_minus, 0.0, 1e-12);
}

TEST(Cocycle, HenonDeterminantIdentity) {
  const auto est = cocycle_exponents(corpus::henon(), henon_cloud());
  EXPECT_EQ(est.n_steps, 200);
  EXPECT_EQ(est.excluded, 0u);
  EXPECT_GE(est.chi_plus, est.chi_minus);
  EXPECT_LE(std::abs(est.chi_plus + est.chi_minus - std::log(0.25)), 2 * est.se_sum + 1e-12);
  EXPECT_LT(est.determinant_residual, 1e-8);
  EXPECT_TRUE(std::isfinite(est.standard_error()));
  // close to log 2 for a degree-2 Hénon map
  EXPECT_NEAR(est.chi_plus, std::log(2.0), 0.05);
}

TEST(Cocycle, PerOrbitEstimatesConverge) {
  const auto& cloud = henon_cloud();
  double prev = INFINITY;
  for (int n : {100, 200, 400}) {
    LyapunovOptions opts;
    opts.steps = n;
    const auto est = cocycle_exponents(corpus::henon(), cloud, opts);
    double mse = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      const double exact = std::log(cloud.points[i].lambda_max) / cloud.points[i].period;
      mse += std::pow(est.point_plus[i] - exact, 2) / cloud.size();
    }
    EXPECT_LE(mse, prev / 2);
    prev = mse;
  }
}

TEST(Cocycle, PointExponentsClusterAroundMean) {
  const auto est = cocycle_exponents(corpus::henon(), henon_cloud());
  const double sd = est.se_plus * std::sqrt(static_cast<double>(henon_cloud().size()));
  int outside = 0;
  for (double x : est.point_plus) outside += std::abs(x - est.chi_plus) > 3 * sd;
  EXPECT_LE(outside, static_cast<int>(henon_cloud().size()) / 20);
}

TEST(Cocycle, ExcludesOrbitsNearIndeterminacy) {
  const auto h = corpus::henon();
  auto pts = std::vector<ProjectivePoint>{henon_cloud().points[0].point, ProjectivePoint(1, 0, 1e-8)};
  const auto est = cocycle_exponents(h, cloud_of(pts));
  EXPECT_EQ(est.excluded, 1u);
  EXPECT_DOUBLE_EQ(est.excluded_mass, 0.5);
  EXPECT_TRUE(std::isnan(est.point_plus[1]));
  EXPECT_THROW(cocycle_exponents(h, cloud_of({ProjectivePoint(1, 0, 0)})), Error);
  LyapunovOptions bad;
  bad.steps = 0;
  EXPECT_THROW(cocycle_exponents(h, henon_cloud(), bad), Error);
}

TEST(Cocycle, Deterministic) {
  const auto a = cocycle_exponents(corpus::henon(), henon_cloud());
  const auto b = cocycle_exponents(corpus::henon(), henon_cloud());
  EXPECT_EQ(a.chi_plus, b.chi_plus);
  EXPECT_EQ(a.point_minus, b.point_minus);
}

TEST(Verdict, HenonIsSaddleType) {
  const auto v = hyperbolicity_verdict(cocycle_exponents(corpus::henon(), henon_cloud()), 2.0);
  EXPECT_TRUE(v.expanding);
  EXPECT_TRUE(v.contracting);
  EXPECT_GE(v.margin_plus, std::log(2.0) - std::log(2.0) / 8 - 0.05);
}

TEST(Verdict, DiagonalMargins) {
  const auto d = corpus::diagonal();
  const auto v = hyperbolicity_verdict(cocycle_exponents(d, saddle_periodic_points(d, 1)), 2.0);
  EXPECT_TRUE(v.expanding && v.contracting);
  EXPECT_NEAR(v.margin_plus, std::log(2.0) - std::log(2.0) / 8, 1e-10);
  EXPECT_NEAR(v.margin_minus, std::log(2.0) - std::log(2.0) / 8, 1e-10);
}

TEST(Verdict, UnitaryFails) {
  const auto v = hyperbolicity_verdict(cocycle_exponents(corpus::unitary(), random_cloud(50, 5)), 2.0);
  EXPECT_FALSE(v.expanding);
  EXPECT_FALSE(v.contracting);
  EXPECT_THROW(hyperbolicity_verdict({}, 0.0), Error);
}

TEST(Integrability, UnitaryMeansVanish) {
  const auto r = integrability_partial(corpus::unitary(), random_cloud(50, 2));
  ASSERT_EQ(r.means.size(), 12u);
  for (double m : r.means) EXPECT_NEAR(m, 0.0, 1e-12);
  EXPECT_EQ(r.verdict, IntegrabilityVerdict::IntegrableConsistent);
}

TEST(Integrability, HenonCloudStabilizes) {
  const auto r = integrability_partial(corpus::henon(), henon_cloud());
  EXPECT_EQ(r.levels.front(), 2.0);
  EXPECT_EQ(r.levels.back(), 4096.0);
  EXPECT_TRUE(r.cauchy);
  EXPECT_LT(r.last_difference, 1e-3);
  EXPECT_EQ(r.verdict, IntegrabilityVerdict::IntegrableConsistent);
}

TEST(Integrability, PlantedNearIndeterminacy) {
  const auto h = corpus::henon();
  std::vector<double> top;
  for (int k = 2; k <= 8; ++k) {
    // along the line at infinity, where h blows [1:0:0] up
    const auto r = integrability_partial(h, cloud_of({ProjectivePoint(1, Complex(0.3, 0.1) * std::pow(10.0, -k), 0)}));
    top.push_back(r.means.back());
    EXPECT_EQ(r.verdict, k >= 6 ? IntegrabilityVerdict::Inconclusive : IntegrabilityVerdict::IntegrableConsistent);
  }
  // slope log 10 per decade
  for (std::size_t i = 1; i < top.size(); ++i) EXPECT_NEAR(top[i] - top[i - 1], std::log(10.0), 0.05);
}
