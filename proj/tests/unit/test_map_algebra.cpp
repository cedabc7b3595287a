#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bimero/corpus.hpp"
#include "bimero/error.hpp"
#include "bimero/surface_map.hpp"

using namespace bimero;

namespace {

HomogeneousPolynomial P(const char* s) { return parse_polynomial(s); }

bool contains(const std::vector<IndeterminacyPoint>& set, const ExactPoint& p) {
  for (const auto& q : set) {
    if (q.exact && *q.exact == p) return true;
  }
  return false;
}

ExactPoint random_exact(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-9, 9);
  while (true) {
    std::array<GaussianRational, 3> c;
    for (auto& v : c) v = GaussianRational(mpq_class(d(rng)), mpq_class(d(rng)));
    if (!c[0].is_zero() || !c[1].is_zero() || !c[2].is_zero()) return ExactPoint(c);
  }
}

}  // namespace

TEST(Apply, CremonaFixedPointAndBlowup) {
  const auto s = corpus::cremona();
  const auto img = apply(s, ExactPoint(1, 1, 1));
  ASSERT_TRUE(std::holds_alternative<ImagePoint>(img));
  EXPECT_EQ(*std::get<ImagePoint>(img).exact, ExactPoint(1, 1, 1));

  const auto blow = apply(s, ExactPoint(1, 0, 0));
  ASSERT_TRUE(std::holds_alternative<Blowup>(blow));
  EXPECT_TRUE(std::get<Blowup>(blow).curve_computed);
  EXPECT_EQ(std::get<Blowup>(blow).curve, P("x"));
}

TEST(Apply, HenonPointAtInfinity) {
  // [0:1:0] lies on the contracted line z = 0, so the image is reported as
  // Collapsed; the image point itself is [0:1:0].
  const auto h = corpus::henon();
  const auto img = apply(h, ExactPoint(0, 1, 0));
  ASSERT_TRUE(std::holds_alternative<Collapsed>(img));
  EXPECT_EQ(*std::get<Collapsed>(img).image.exact, ExactPoint(0, 1, 0));
  EXPECT_EQ(std::get<Collapsed>(img).source_curve, P("z"));
  const auto num = apply(h, ProjectivePoint(0, 1, 0));
  ASSERT_TRUE(std::holds_alternative<ImagePoint>(num));
  EXPECT_TRUE(proj_equal(std::get<ImagePoint>(num).point, ProjectivePoint(0, 1, 0)));
}

TEST(Apply, HenonBlowupIsLineAtInfinity) {
  const auto blow = apply(corpus::henon(), ExactPoint(1, 0, 0));
  ASSERT_TRUE(std::holds_alternative<Blowup>(blow));
  EXPECT_EQ(std::get<Blowup>(blow).curve, P("z"));
}

TEST(Apply, CollapsedOnCriticalLine) {
  // sigma contracts the line x = 0 to [1:0:0].
  const auto img = apply(corpus::cremona(), ExactPoint(0, 1, 2));
  ASSERT_TRUE(std::holds_alternative<Collapsed>(img));
  const auto& c = std::get<Collapsed>(img);
  EXPECT_EQ(*c.image.exact, ExactPoint(1, 0, 0));
  EXPECT_EQ(c.source_curve, P("x"));
}

TEST(Apply, NumericBlowupFlag) {
  const auto img = apply(corpus::cremona(), ProjectivePoint(1, 1e-12, 0));
  ASSERT_TRUE(std::holds_alternative<Blowup>(img));
  EXPECT_FALSE(std::get<Blowup>(img).curve_computed);
}

TEST(Compose, CremonaSquaredIsIdentity) {
  const auto s = corpus::cremona();
  const auto ss = compose(s, s);
  EXPECT_EQ(ss.degree(), 1);
  EXPECT_TRUE(is_identity(ss.forward()));
}

TEST(Compose, HenonSquaredHasDegreeFour) {
  const auto h = corpus::henon();
  const auto hh = compose(h, h);
  EXPECT_EQ(hh.degree(), 4);
  EXPECT_EQ(reduce(hh.forward())[0].degree(), 4);
}

TEST(Compose, IdentityIsNeutral) {
  const auto h = corpus::henon();
  EXPECT_EQ(compose(h, identity_map()).forward(), h.forward());
  EXPECT_EQ(compose(identity_map(), h).forward(), h.forward());
}

TEST(Compose, OverflowReported) {
  const auto l = corpus::lsigma();
  try {
    degree_sequence(l, 8, 40);
    FAIL();
  } catch (const CoefficientOverflow& e) {
    EXPECT_GE(e.completed(), 1u);
    EXPECT_LT(e.completed(), 8u);
  }
}

TEST(Compose, AgreesWithIteratedApply) {
  const auto h = corpus::henon();
  const auto l = corpus::lsigma();
  const auto hl = compose(h, l);
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 100) {
    const ExactPoint p = random_exact(rng);
    const auto a = apply(l, p);
    if (!std::holds_alternative<ImagePoint>(a)) continue;
    const auto b = apply(h, *std::get<ImagePoint>(a).exact);
    if (!std::holds_alternative<ImagePoint>(b)) continue;
    const auto c = apply(hl, p);
    if (!std::holds_alternative<ImagePoint>(c)) continue;
    EXPECT_EQ(*std::get<ImagePoint>(b).exact, *std::get<ImagePoint>(c).exact);
    ++checked;
  }
}

TEST(Indeterminacy, Cremona) {
  const auto s = corpus::cremona();
  const auto& i = s.indeterminacy();
  ASSERT_EQ(i.size(), 3u);
  EXPECT_TRUE(contains(i, ExactPoint(1, 0, 0)));
  EXPECT_TRUE(contains(i, ExactPoint(0, 1, 0)));
  EXPECT_TRUE(contains(i, ExactPoint(0, 0, 1)));
}

TEST(Indeterminacy, Henon) {
  const auto h = corpus::henon();
  ASSERT_EQ(h.indeterminacy().size(), 1u);
  EXPECT_TRUE(contains(h.indeterminacy(), ExactPoint(1, 0, 0)));
  ASSERT_EQ(h.inverse_indeterminacy().size(), 1u);
  EXPECT_TRUE(contains(h.inverse_indeterminacy(), ExactPoint(0, 1, 0)));
}

TEST(Indeterminacy, LinearIsEmpty) {
  const auto l = corpus::linear();
  EXPECT_TRUE(l.indeterminacy().empty());
}

TEST(Indeterminacy, LSigmaInverseIsImageOfCoordinatePoints) {
  const auto l = corpus::lsigma();
  const auto& inv = l.inverse_indeterminacy();
  ASSERT_EQ(inv.size(), 3u);
  EXPECT_TRUE(contains(inv, ExactPoint(1, 0, 2)));
  EXPECT_TRUE(contains(inv, ExactPoint(2, 1, -1)));
  EXPECT_TRUE(contains(inv, ExactPoint(-1, 3, 1)));
}

TEST(Indeterminacy, IrrationalPointsAreCertified) {
  // Common zeros [1 : +-sqrt(2) : 1] are not Gaussian rational.
  const PolyTriple f{P("y^2 - 2*x^2 + x*z - z^2"), P("x*z - z^2"), P("x^2 - x*z")};
  const auto pts = indeterminacy_set(f);
  ASSERT_EQ(pts.size(), 2u);
  for (const auto& p : pts) {
    EXPECT_FALSE(p.exact.has_value());
    EXPECT_LT(p.residual, 1e-10);
    EXPECT_NEAR(std::abs(p.point[1] / p.point[0]), std::sqrt(2.0), 1e-9);
  }
}

TEST(Indeterminacy, PositiveDimensionalRejected) {
  const PolyTriple f{P("x*y"), P("x*z"), P("x^2")};
  try {
    indeterminacy_set(f);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PositiveDimensionalLocus);
  }
}

TEST(Indeterminacy, HigherDegreeIterate) {
  const auto h = corpus::henon();
  const auto hh = compose(h, h);
  const auto& i = hh.indeterminacy();
  ASSERT_EQ(i.size(), 1u);
  EXPECT_TRUE(contains(i, ExactPoint(1, 0, 0)));
}

TEST(CriticalSet, Cremona) {
  const auto c = critical_set(corpus::cremona());
  ASSERT_EQ(c.size(), 3u);
  for (const auto& f : c) {
    EXPECT_EQ(f.multiplicity, 1);
    EXPECT_EQ(f.factor.degree(), 1);
  }
  EXPECT_EQ(jacobian_determinant(corpus::cremona().forward()), P("2*x*y*z"));
}

TEST(CriticalSet, Linear) { EXPECT_TRUE(critical_set(corpus::linear()).empty()); }

TEST(CriticalSet, Henon) {
  EXPECT_EQ(jacobian_determinant(corpus::henon().forward()), P("1/2*z^3"));
  const auto c = critical_set(corpus::henon());
  ASSERT_EQ(c.size(), 1u);
  EXPECT_EQ(c[0].factor, P("z"));
  EXPECT_EQ(c[0].multiplicity, 3);
}

TEST(CriticalSet, TotalDegree) {
  for (const auto& f : {corpus::cremona(), corpus::henon(), corpus::lsigma()}) {
    int total = 0;
    for (const auto& c : critical_set(f)) total += c.factor.degree() * c.multiplicity;
    EXPECT_EQ(total, 3 * (f.degree() - 1));
  }
  EXPECT_EQ(jacobian_determinant(corpus::lsigma().forward()), P("36*x*y*z"));
}

TEST(VerifyInverse, Examples) {
  EXPECT_TRUE(verify_inverse(corpus::cremona()));
  EXPECT_TRUE(verify_inverse(corpus::henon()));
  EXPECT_TRUE(verify_inverse(corpus::lsigma()));
  EXPECT_TRUE(verify_inverse(corpus::linear()));
  const RationalSurfaceMap wrong("henon-wrong", corpus::henon().forward(), corpus::cremona().forward());
  EXPECT_FALSE(verify_inverse(wrong));
  const RationalSurfaceMap none("henon-bare", corpus::henon().forward());
  try {
    verify_inverse(none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MissingInverse);
  }
}

TEST(DegreeSequence, Examples) {
  const auto s = degree_sequence(corpus::cremona(), 4);
  EXPECT_EQ(s.degrees, (std::vector<int>{2, 1, 2, 1}));
  EXPECT_FALSE(s.stable);
  const auto h = degree_sequence(corpus::henon(), 5);
  EXPECT_EQ(h.degrees, (std::vector<int>{2, 4, 8, 16, 32}));
  EXPECT_TRUE(h.stable);
  const auto id = degree_sequence(identity_map(), 3);
  EXPECT_EQ(id.degrees, (std::vector<int>{1, 1, 1}));
  EXPECT_TRUE(id.stable);
  EXPECT_EQ(degree_sequence(corpus::lsigma(), 5).degrees, (std::vector<int>{2, 4, 8, 16, 32}));
}

TEST(DegreeSequence, BoundedByPowers) {
  const auto s = degree_sequence(corpus::lsigma(), 4);
  long bound = 1;
  for (int d : s.degrees) {
    bound *= 2;
    EXPECT_LE(d, bound);
  }
}

TEST(DerivativeNorm, UnitaryIsOne) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n;
  const auto u = corpus::unitary();
  for (int k = 0; k < 50; ++k) {
    const ProjectivePoint p(Vec3(Complex(n(rng), n(rng)), Complex(n(rng), n(rng)), Complex(n(rng), n(rng))));
    EXPECT_NEAR(derivative_norm(u, p), 1.0, 1e-12);
  }
}

TEST(DerivativeNorm, DiagonalAtCoordinatePoint) {
  const RationalSurfaceMap d("diag211", {P("2*x"), P("y"), P("z")});
  EXPECT_NEAR(derivative_norm(d, ProjectivePoint(0, 1, 0)), 2.0, 1e-14);
}

TEST(DerivativeNorm, TooCloseToIndeterminacy) {
  const auto h = corpus::henon();
  try {
    derivative_norm(h, ProjectivePoint(1, 0, 1e-12));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooCloseToIndeterminacy);
  }
}

TEST(DerivativeNorm, BlowsUpNearHenonIndeterminacy) {
  // Along the parabola z = 4y^2 (x = 1) the blow-up spreads [1:0:0] over the
  // whole line z = 0, so the differential is unbounded there.
  const auto h = corpus::henon();
  const ProjectivePoint q(1, 0, 0);
  std::vector<double> xs, ys;
  for (int k = 1; k <= 4; ++k) {
    const double s = std::pow(10.0, -k);
    const ProjectivePoint p(1, s, 4 * s * s);
    xs.push_back(-std::log(proj_distance(p, q)));
    ys.push_back(std::log(derivative_norm(h, p)));
  }
  const double slope = (ys.back() - ys.front()) / (xs.back() - xs.front());
  EXPECT_GT(slope, 0.5);
  EXPECT_GT(ys.back(), 10.0);
}

TEST(DerivativeNorm, LogSingularBoundOnSamples) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n;
  for (const auto& f : {corpus::cremona(), corpus::henon(), corpus::lsigma()}) {
    std::vector<std::pair<double, double>> samples;
    for (int k = 0; k < 1000; ++k) {
      const Vec3 v(Complex(n(rng), n(rng)), Complex(n(rng), n(rng)), Complex(n(rng), n(rng)));
      const ProjectivePoint p(v);
      const double d = distance_to_set(p, f.indeterminacy());
      if (d < 1e-8) continue;
      samples.push_back({-std::log(d), std::log(derivative_norm(f, p))});
    }
    // Fit A, B with B from the steepest ratio and A as the max intercept.
    double b = 0;
    for (const auto& [x, y] : samples) b = std::max(b, x > 1 ? y / x : 0.0);
    double a = -INFINITY;
    for (const auto& [x, y] : samples) a = std::max(a, y - b * x);
    for (const auto& [x, y] : samples) EXPECT_LE(y, a + b * x + 1e-12);
    EXPECT_LT(b, 10.0);
    EXPECT_TRUE(std::isfinite(a));
  }
}

TEST(SecondDerivative, LinearMapIsFlatInChart) {
  const RationalSurfaceMap d("diag", {P("2*x"), P("y"), P("z")});
  EXPECT_NEAR(second_derivative_norm(d, ProjectivePoint(0.1, 0.2, 1)), 0.0, 1e-12);
  EXPECT_GT(second_derivative_norm(corpus::henon(), ProjectivePoint(0.5, 0.3, 1)), 0.0);
}

TEST(SecondDerivative, LogSingularGrowth) {
  const auto h = corpus::henon();
  const ProjectivePoint q(1, 0, 0);
  const double r1 = 1e-2, r2 = 1e-6;
  const Vec3 dir(0, Complex(0.3, 0.1), 1);
  const double a = std::log(second_derivative_norm(h, point_at_distance(q, dir, r1)));
  const double b = std::log(second_derivative_norm(h, point_at_distance(q, dir, r2)));
  const double slope = (b - a) / (std::log(r1) - std::log(r2));
  EXPECT_GT(slope, 0.0);
  EXPECT_LT(slope, 10.0);
}
