#include "bimero/surface_map.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "bimero/error.hpp"

namespace bimero {

struct RationalSurfaceMap::Cache {
  std::once_flag indeterminacy_once;
  std::vector<IndeterminacyPoint> indeterminacy;
  std::once_flag inverse_indeterminacy_once;
  std::vector<IndeterminacyPoint> inverse_indeterminacy;
  std::once_flag critical_once;
  std::vector<CriticalFactor> critical;
  std::once_flag inverse_critical_once;
  std::vector<CriticalFactor> inverse_critical;
};

namespace {

void validate_triple(const PolyTriple& t, const char* what) {
  const int d = t[0].degree();
  for (const auto& c : t) {
    if (c.is_zero()) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": zero component");
    if (c.degree() != d) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": components of different degree");
  }
  if (d < 1) throw Error(ErrorCode::InvalidArgument, std::string(what) + ": degree must be at least 1");
  if (reduce(t)[0].degree() != d) {
    throw Error(ErrorCode::PositiveDimensionalLocus, std::string(what) + ": components share a common factor");
  }
}

}  // namespace

RationalSurfaceMap::RationalSurfaceMap(std::string name, PolyTriple forward, std::optional<PolyTriple> inverse)
    : name_(std::move(name)), forward_(std::move(forward)), inverse_(std::move(inverse)),
      cache_(std::make_shared<Cache>()) {
  validate_triple(forward_, "forward map");
  numeric_ = NumericMap(forward_);
  if (inverse_) {
    validate_triple(*inverse_, "inverse map");
    numeric_inverse_ = NumericMap(*inverse_);
  }
}

const NumericMap& RationalSurfaceMap::numeric_inverse() const {
  if (!numeric_inverse_) throw Error(ErrorCode::MissingInverse, "map '" + name_ + "' has no inverse");
  return *numeric_inverse_;
}

RationalSurfaceMap RationalSurfaceMap::inverted() const {
  if (!inverse_) throw Error(ErrorCode::MissingInverse, "map '" + name_ + "' has no inverse");
  RationalSurfaceMap r(*this);
  std::swap(r.forward_, *r.inverse_);
  std::swap(r.numeric_, *r.numeric_inverse_);
  r.name_ = name_ + "^-1";
  r.cache_ = std::make_shared<Cache>();
  return r;
}

const std::vector<IndeterminacyPoint>& RationalSurfaceMap::indeterminacy() const {
  std::call_once(cache_->indeterminacy_once, [this] { cache_->indeterminacy = indeterminacy_set(forward_); });
  return cache_->indeterminacy;
}

const std::vector<IndeterminacyPoint>& RationalSurfaceMap::inverse_indeterminacy() const {
  if (!inverse_) throw Error(ErrorCode::MissingInverse, "map '" + name_ + "' has no inverse");
  std::call_once(cache_->inverse_indeterminacy_once,
                 [this] { cache_->inverse_indeterminacy = indeterminacy_set(*inverse_); });
  return cache_->inverse_indeterminacy;
}

const std::vector<CriticalFactor>& RationalSurfaceMap::critical_factors() const {
  std::call_once(cache_->critical_once, [this] { cache_->critical = critical_set(forward_); });
  return cache_->critical;
}

const std::vector<CriticalFactor>& RationalSurfaceMap::inverse_critical_factors() const {
  if (!inverse_) throw Error(ErrorCode::MissingInverse, "map '" + name_ + "' has no inverse");
  std::call_once(cache_->inverse_critical_once, [this] { cache_->inverse_critical = critical_set(*inverse_); });
  return cache_->inverse_critical;
}

std::size_t RationalSurfaceMap::max_coefficient_bits() const {
  std::size_t b = 0;
  for (const auto& c : forward_) b = std::max(b, c.max_coefficient_bits());
  return b;
}

RationalSurfaceMap identity_map() {
  return RationalSurfaceMap(
      "identity",
      {HomogeneousPolynomial::variable(0), HomogeneousPolynomial::variable(1), HomogeneousPolynomial::variable(2)},
      PolyTriple{HomogeneousPolynomial::variable(0), HomogeneousPolynomial::variable(1),
                 HomogeneousPolynomial::variable(2)});
}

PolyTriple reduce(const PolyTriple& t) {
  std::optional<HomogeneousPolynomial> g;
  for (const auto& c : t) {
    if (c.is_zero()) continue;
    g = g ? poly_gcd(*g, c) : c.monic();
    if (g->degree() == 0) return t;
  }
  if (!g) return t;
  PolyTriple r;
  for (int i = 0; i < 3; ++i) {
    if (t[i].is_zero()) {
      r[i] = HomogeneousPolynomial(t[i].degree() - g->degree());
      continue;
    }
    auto q = divide_exact(t[i], *g);
    if (!q) throw Error(ErrorCode::InvalidArgument, "gcd does not divide a component");
    r[i] = std::move(*q);
  }
  return r;
}

bool is_identity(const PolyTriple& t) {
  if (t[0].degree() != 1) return false;
  const GaussianRational lambda = t[0].coefficient({1, 0, 0});
  if (lambda.is_zero()) return false;
  for (int i = 0; i < 3; ++i) {
    Exponent e{0, 0, 0};
    e[i] = 1;
    if (t[i].size() != 1 || t[i].coefficient(e) != lambda) return false;
  }
  return true;
}

PolyTriple compose(const PolyTriple& f, const PolyTriple& g, std::size_t max_bits) {
  PolyTriple r;
  for (int i = 0; i < 3; ++i) {
    r[i] = f[i].substitute(g);
    if (r[i].max_coefficient_bits() > max_bits) {
      throw CoefficientOverflow(0, "composition coefficient exceeds " + std::to_string(max_bits) + " bits");
    }
  }
  return reduce(r);
}

RationalSurfaceMap compose(const RationalSurfaceMap& f, const RationalSurfaceMap& g, std::size_t max_bits) {
  std::optional<PolyTriple> inv;
  if (f.has_inverse() && g.has_inverse()) inv = compose(*g.inverse(), *f.inverse(), max_bits);
  return RationalSurfaceMap(f.name() + "*" + g.name(), compose(f.forward(), g.forward(), max_bits), std::move(inv));
}

bool verify_inverse(const RationalSurfaceMap& f) {
  if (!f.has_inverse()) throw Error(ErrorCode::MissingInverse, "map '" + f.name() + "' has no inverse");
  return is_identity(compose(f.forward(), *f.inverse()));
}

DegreeSequence degree_sequence(const RationalSurfaceMap& f, int n, std::size_t max_bits) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "degree_sequence needs N >= 1");
  DegreeSequence out;
  PolyTriple current = f.forward();
  out.degrees.push_back(current[0].degree());
  long expected = f.degree();
  for (int k = 2; k <= n; ++k) {
    try {
      current = compose(f.forward(), current, max_bits);
    } catch (const CoefficientOverflow& e) {
      throw CoefficientOverflow(static_cast<std::size_t>(k - 1), e.what());
    }
    out.degrees.push_back(current[0].degree());
  }
  for (int d : out.degrees) {
    if (d != expected) out.stable = false;
    expected *= f.degree();
  }
  return out;
}

const std::vector<IndeterminacyPoint>& indeterminacy_set(const RationalSurfaceMap& f) { return f.indeterminacy(); }

HomogeneousPolynomial jacobian_determinant(const PolyTriple& f) {
  std::array<std::array<HomogeneousPolynomial, 3>, 3> d;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) d[i][j] = f[i].derivative(j);
  }
  auto minor = [&](int a, int b) { return d[1][a] * d[2][b] - d[1][b] * d[2][a]; };
  return d[0][0] * minor(1, 2) - d[0][1] * minor(0, 2) + d[0][2] * minor(0, 1);
}

std::vector<CriticalFactor> critical_set(const PolyTriple& f) {
  const HomogeneousPolynomial jac = jacobian_determinant(f);
  if (jac.is_zero()) throw Error(ErrorCode::InvalidArgument, "Jacobian determinant vanishes identically");
  std::vector<CriticalFactor> out;
  for (auto& [factor, m] : squarefree_factorization(jac)) out.push_back({factor.monic(), m});
  return out;
}

const std::vector<CriticalFactor>& critical_set(const RationalSurfaceMap& f) { return f.critical_factors(); }

namespace {

// Part of the curves collapsed by f^{-1} onto p, i.e. the image of the blow-up of p.
std::optional<HomogeneousPolynomial> blowup_curve_from_inverse(const RationalSurfaceMap& f, const ExactPoint& p) {
  const PolyTriple& g = *f.inverse();
  HomogeneousPolynomial curve = HomogeneousPolynomial::constant(1);
  for (const auto& cf : f.inverse_critical_factors()) {
    HomogeneousPolynomial part = cf.factor;
    for (int i = 0; i < 3 && part.degree() > 0; ++i) {
      for (int j = i + 1; j < 3 && part.degree() > 0; ++j) {
        const HomogeneousPolynomial m = p[i] * g[j] - p[j] * g[i];
        if (!m.is_zero()) part = poly_gcd(part, m);
      }
    }
    if (part.degree() > 0) curve = curve * part;
  }
  if (curve.degree() == 0) return std::nullopt;
  return curve.monic();
}

// Image line of the tangent directions when DF(p) has rank 2.
std::optional<HomogeneousPolynomial> blowup_curve_from_linear_part(const PolyTriple& f, const ExactPoint& p) {
  std::array<std::array<GaussianRational, 3>, 3> jac;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) jac[i][j] = f[i].derivative(j).evaluate(p.coords());
  }
  auto column = [&](int j) { return std::array<GaussianRational, 3>{jac[0][j], jac[1][j], jac[2][j]}; };
  auto cross = [](const std::array<GaussianRational, 3>& a, const std::array<GaussianRational, 3>& b) {
    return std::array<GaussianRational, 3>{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                                           a[0] * b[1] - a[1] * b[0]};
  };
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const auto n = cross(column(a), column(b));
      if (n[0].is_zero() && n[1].is_zero() && n[2].is_zero()) continue;
      HomogeneousPolynomial line(1);
      for (int k = 0; k < 3; ++k) {
        Exponent e{0, 0, 0};
        e[k] = 1;
        if (!n[k].is_zero()) line.add_term(e, n[k]);
      }
      return line.monic();
    }
  }
  return std::nullopt;
}

}  // namespace

MapImage apply(const RationalSurfaceMap& f, const ExactPoint& p) {
  std::array<GaussianRational, 3> w;
  for (int i = 0; i < 3; ++i) w[i] = f.forward()[i].evaluate(p.coords());
  if (w[0].is_zero() && w[1].is_zero() && w[2].is_zero()) {
    std::optional<HomogeneousPolynomial> curve;
    if (f.has_inverse()) curve = blowup_curve_from_inverse(f, p);
    if (!curve) curve = blowup_curve_from_linear_part(f.forward(), p);
    if (curve) return Blowup{*curve, true};
    return Blowup{HomogeneousPolynomial(), false};
  }
  ExactPoint image(w);
  ImagePoint ip{image.to_numeric(), image};
  for (const auto& cf : f.critical_factors()) {
    if (cf.factor.evaluate(p.coords()).is_zero()) return Collapsed{ip, cf.factor};
  }
  return ip;
}

MapImage apply(const RationalSurfaceMap& f, const ProjectivePoint& p, double eps) {
  const Vec3 w = f.numeric().evaluate(p.unit());
  if (w.norm() <= eps * f.numeric().coefficient_norm()) return Blowup{HomogeneousPolynomial(), false};
  return ImagePoint{ProjectivePoint(w), std::nullopt};
}

double distance_to_set(const ProjectivePoint& p, const std::vector<IndeterminacyPoint>& set) {
  double d = 1.0;
  for (const auto& q : set) d = std::min(d, proj_distance(p, q.point));
  return d;
}

Mat2 tangent_map(const NumericMap& f, const Vec3& z, Vec3* image, double* lift_norm) {
  const Vec3 w = f.evaluate(z);
  const double nw = w.norm();
  if (!(nw > 0.0) || !std::isfinite(nw)) throw Error(ErrorCode::NumericUnderflow, "lift vanishes at the point");
  const Vec3 wh = w / nw;
  const Eigen::Matrix<Complex, 3, 2> u = orthonormal_complement(z);
  const Eigen::Matrix<Complex, 3, 2> b = orthonormal_complement(wh);
  if (image) *image = wh;
  if (lift_norm) *lift_norm = nw;
  return b.adjoint() * f.jacobian(z) * u / nw;
}

double derivative_norm(const RationalSurfaceMap& f, const ProjectivePoint& p, double eps) {
  if (distance_to_set(p, f.indeterminacy()) <= eps) {
    throw Error(ErrorCode::TooCloseToIndeterminacy, "point " + p.to_string() + " is within tolerance of I(f)");
  }
  const Mat2 d = tangent_map(f.numeric(), p.unit());
  Eigen::JacobiSVD<Mat2> svd(d);
  return svd.singularValues()(0);
}

double second_derivative_norm(const RationalSurfaceMap& f, const ProjectivePoint& p, double eps) {
  if (distance_to_set(p, f.indeterminacy()) <= eps) {
    throw Error(ErrorCode::TooCloseToIndeterminacy, "point " + p.to_string() + " is within tolerance of I(f)");
  }
  const int k = p.dominant_index();
  const Vec3 z = p.unit() / p.unit()(k);
  const NumericMap& F = f.numeric();
  const Vec3 w = F.evaluate(z);
  int m = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(w(i)) > std::abs(w(m))) m = i;
  }
  int idx[2];
  for (int i = 0, s = 0; i < 3; ++i) {
    if (i != k) idx[s++] = i;
  }
  const Complex den = w(m);
  const Vec3 gd = F.component(m).gradient(z);
  const Mat3 hd = F.component(m).hessian(z);
  double total = 0.0;
  for (int a = 0; a < 3; ++a) {
    if (a == m) continue;
    const Complex num = w(a);
    const Vec3 gn = F.component(a).gradient(z);
    const Mat3 hn = F.component(a).hessian(z);
    for (int s = 0; s < 2; ++s) {
      for (int t = 0; t < 2; ++t) {
        const int i = idx[s];
        const int j = idx[t];
        const Complex v = hn(i, j) / den - (gn(i) * gd(j) + gn(j) * gd(i)) / (den * den) -
                          num * hd(i, j) / (den * den) + 2.0 * num * gd(i) * gd(j) / (den * den * den);
        total += std::norm(v);
      }
    }
  }
  return std::sqrt(total);
}

}  // namespace bimero
