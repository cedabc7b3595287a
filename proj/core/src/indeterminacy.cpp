// Common zeros of three homogeneous polynomials. After a random exact change
// of coordinates, two random combinations G1, G2 are intersected by taking the
// resultant in y (built by exact evaluation/interpolation in x), then each
// root is lifted back, checked against all three components and made exact
// when its coordinates are small Gaussian rationals.

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <random>

#include "bimero/error.hpp"
#include "bimero/surface_map.hpp"
#include "univariate.hpp"

namespace bimero {
namespace {

using detail::UPoly;
using Matrix3Q = std::array<std::array<GaussianRational, 3>, 3>;

constexpr long kMaxDenominator = 10000;
constexpr double kAcceptResidual = 1e-10;
constexpr double kDedupDistance = 1e-7;
constexpr double kMergeDistance = 1e-4;
constexpr int kAttempts = 20;

std::vector<GaussianRational> powers(const GaussianRational& x, int n) {
  std::vector<GaussianRational> p(n + 1);
  p[0] = GaussianRational(1);
  for (int k = 1; k <= n; ++k) p[k] = p[k - 1] * x;
  return p;
}

// p(x0, y, 1) as a polynomial in y.
UPoly restrict_to_x(const HomogeneousPolynomial& p, const GaussianRational& x0) {
  const auto xp = powers(x0, p.degree());
  UPoly r(p.degree() + 1);
  for (const auto& [e, c] : p.terms()) r[e[1]] += c * xp[e[0]];
  detail::trim(r);
  return r;
}

std::vector<Complex> restrict_to_x(const HomogeneousPolynomial& p, Complex x0) {
  std::vector<Complex> r(p.degree() + 1, 0.0);
  for (const auto& [e, c] : p.terms()) r[e[1]] += c.to_complex() * std::pow(x0, e[0]);
  while (r.size() > 1 && r.back() == 0.0) r.pop_back();
  return r;
}

Complex horner(const std::vector<Complex>& c, Complex x) {
  Complex v = 0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

GaussianRational sylvester_resultant(const UPoly& a, const UPoly& b) {
  const int m = detail::degree(a);
  const int n = detail::degree(b);
  const int size = m + n;
  if (size == 0) return GaussianRational(1);
  std::vector<GaussianRational> s(static_cast<std::size_t>(size) * size);
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k <= m; ++k) s[r * size + r + k] = a[m - k];
  }
  for (int r = 0; r < m; ++r) {
    for (int k = 0; k <= n; ++k) s[(n + r) * size + r + k] = b[n - k];
  }
  return detail::determinant(std::move(s), size);
}

GaussianRational det3(const Matrix3Q& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

double residual(const NumericMap& f, const Vec3& z) {
  const Vec3 u = z / z.norm();
  return f.evaluate(u).cwiseAbs().maxCoeff() / f.coefficient_norm();
}

// Gauss-Newton on F = 0 in the dominant affine chart.
Vec3 polish(const NumericMap& f, Vec3 z) {
  for (int it = 0; it < 200; ++it) {
    z /= z.norm();
    int k = 0;
    for (int i = 1; i < 3; ++i) {
      if (std::abs(z(i)) > std::abs(z(k))) k = i;
    }
    z /= z(k);
    const Vec3 r = f.evaluate(z);
    if (r.norm() == 0.0) break;
    const Mat3 j = f.jacobian(z);
    Eigen::Matrix<Complex, 3, 2> a;
    for (int i = 0, s = 0; i < 3; ++i) {
      if (i != k) a.col(s++) = j.col(i);
    }
    const Vec2 step = a.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    for (int i = 0, s = 0; i < 3; ++i) {
      if (i != k) z(i) += step(s++);
    }
    if (step.norm() < 1e-17 * z.norm()) break;
  }
  return z / z.norm();
}

std::optional<ExactPoint> try_exact(const PolyTriple& f, const Vec3& z) {
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(z(i)) > std::abs(z(k))) k = i;
  }
  const Vec3 w = z / z(k);
  std::array<GaussianRational, 3> c;
  for (int i = 0; i < 3; ++i) {
    c[i] = GaussianRational(rationalize(w(i).real(), kMaxDenominator), rationalize(w(i).imag(), kMaxDenominator));
    if (std::abs(c[i].to_complex() - w(i)) > 1e-6) return std::nullopt;
  }
  for (const auto& p : f) {
    if (!p.evaluate(c).is_zero()) return std::nullopt;
  }
  return ExactPoint(c);
}

bool all_vanish(const PolyTriple& f, const std::array<GaussianRational, 3>& p) {
  return std::all_of(f.begin(), f.end(), [&](const auto& c) { return c.evaluate(p).is_zero(); });
}

struct Candidate {
  std::optional<std::array<GaussianRational, 3>> exact;  // in transformed coordinates
  Vec3 numeric;
};

// Candidates (x, y, 1) for the common zeros of g1, g2 in the affine chart z = 1.
std::optional<std::vector<Candidate>> intersect(const HomogeneousPolynomial& g1, const HomogeneousPolynomial& g2) {
  const int d1 = g1.degree();
  const int d2 = g2.degree();
  if (g1.coefficient({0, d1, 0}).is_zero() || g2.coefficient({0, d2, 0}).is_zero()) return std::nullopt;
  const int total = d1 * d2;
  std::vector<GaussianRational> xs, ys;
  for (int k = 0; k <= total; ++k) {
    const GaussianRational x(k);
    xs.push_back(x);
    ys.push_back(sylvester_resultant(restrict_to_x(g1, x), restrict_to_x(g2, x)));
  }
  const UPoly res = detail::interpolate(xs, ys);
  // Fewer than d1*d2 affine solutions means some lie on z = 0 or the pair is degenerate.
  if (detail::degree(res) != total) return std::nullopt;

  std::vector<Candidate> out;
  const UPoly sq = detail::squarefree_part(res);
  if (detail::degree(sq) < 1) return out;
  for (const Complex x0 : detail::roots(detail::to_complex(sq))) {
    std::optional<GaussianRational> exact_x;
    for (long den : {kMaxDenominator, 1000000L, 100000000L}) {
      const GaussianRational xq(rationalize(x0.real(), den), rationalize(x0.imag(), den));
      if (std::abs(xq.to_complex() - x0) < 1e-6 * (1 + std::abs(x0)) && detail::evaluate(sq, xq).is_zero()) {
        exact_x = xq;
        break;
      }
    }
    if (exact_x) {
      const GaussianRational& xq = *exact_x;
      const UPoly g = detail::gcd(restrict_to_x(g1, xq), restrict_to_x(g2, xq));
      if (detail::degree(g) == 1) {
        const GaussianRational y = -g[0] / g[1];
        out.push_back({std::array<GaussianRational, 3>{xq, y, GaussianRational(1)},
                       Vec3(xq.to_complex(), y.to_complex(), 1.0)});
        continue;
      }
      if (detail::degree(g) > 1) {
        for (const Complex y : detail::roots(detail::to_complex(detail::squarefree_part(g)))) {
          out.push_back({std::nullopt, Vec3(x0, y, 1.0)});
        }
        continue;
      }
    }
    const auto a = restrict_to_x(g1, x0);
    const auto b = restrict_to_x(g2, x0);
    if (a.size() < 2) continue;
    Complex best = 0;
    double best_val = INFINITY;
    for (const Complex y : detail::roots(a)) {
      const double v = std::abs(horner(b, y));
      if (v < best_val) {
        best_val = v;
        best = y;
      }
    }
    out.push_back({std::nullopt, Vec3(x0, best, 1.0)});
  }
  return out;
}

}  // namespace

std::vector<IndeterminacyPoint> indeterminacy_set(const PolyTriple& f) {
  const int d = f[0].degree();
  for (const auto& c : f) {
    if (c.is_zero() || c.degree() != d) throw Error(ErrorCode::InvalidArgument, "invalid component triple");
  }
  if (reduce(f)[0].degree() != d) throw Error(ErrorCode::PositiveDimensionalLocus, "components share a factor");
  const NumericMap nf(f);

  std::mt19937_64 rng(0x1d0e7e5a11ULL);
  std::uniform_int_distribution<int> small(-4, 4);
  auto gauss_int = [&] { return GaussianRational(mpq_class(small(rng)), mpq_class(small(rng))); };

  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Matrix3Q m;
    for (auto& row : m) {
      for (auto& e : row) e = gauss_int();
    }
    if (det3(m).is_zero()) continue;
    PolyTriple t;
    for (int i = 0; i < 3; ++i) t[i] = f[i].linear_substitute(m);
    HomogeneousPolynomial g1(d), g2(d);
    for (int i = 0; i < 3; ++i) {
      g1 += gauss_int() * t[i];
      g2 += gauss_int() * t[i];
    }
    if (g1.is_zero() || g2.is_zero()) continue;
    const auto candidates = intersect(g1, g2);
    if (!candidates) continue;

    std::vector<IndeterminacyPoint> out;
    auto add = [&](IndeterminacyPoint p) {
      for (const auto& q : out) {
        if (proj_distance(p.point, q.point) < kDedupDistance) return;
      }
      out.push_back(std::move(p));
    };
    for (const auto& c : *candidates) {
      if (!c.exact) continue;
      std::array<GaussianRational, 3> p;
      for (int i = 0; i < 3; ++i) p[i] = m[i][0] * (*c.exact)[0] + m[i][1] * (*c.exact)[1] + m[i][2] * (*c.exact)[2];
      if (all_vanish(f, p)) {
        ExactPoint e(p);
        add({e.to_numeric(), e, 0.0});
      }
    }
    std::vector<Vec3> inexact;
    for (const auto& c : *candidates) {
      if (c.exact) continue;
      Vec3 z;
      for (int i = 0; i < 3; ++i) {
        z(i) = m[i][0].to_complex() * c.numeric(0) + m[i][1].to_complex() * c.numeric(1) +
               m[i][2].to_complex() * c.numeric(2);
      }
      if (residual(nf, z) > 1e-4) continue;
      z = polish(nf, z);
      if (auto e = try_exact(f, z)) {
        add({e->to_numeric(), *e, 0.0});
      } else {
        inexact.push_back(z);
      }
    }
    const std::size_t n_exact = out.size();
    for (const Vec3& z : inexact) {
      // Near a multiple exact zero the residual is flat and Newton stalls short
      // of it; such candidates are the exact point, not a new one.
      const ProjectivePoint pz(z);
      bool merged = false;
      for (std::size_t k = 0; k < n_exact; ++k) merged = merged || proj_distance(pz, out[k].point) < kMergeDistance;
      if (merged) continue;
      const double r = residual(nf, z);
      if (r < kAcceptResidual) add({pz, std::nullopt, r});
    }
    std::sort(out.begin(), out.end(), [](const IndeterminacyPoint& a, const IndeterminacyPoint& b) {
      const Vec3& u = a.point.unit();
      const Vec3& v = b.point.unit();
      for (int i = 0; i < 3; ++i) {
        if (std::abs(u(i)) != std::abs(v(i))) return std::abs(u(i)) > std::abs(v(i));
      }
      return false;
    });
    return out;
  }
  throw Error(ErrorCode::InvalidArgument, "indeterminacy solver found no generic coordinate system");
}

}  // namespace bimero
