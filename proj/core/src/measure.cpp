#include "bimero/measure.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "bimero/error.hpp"
#include "bimero/parallel.hpp"
#include "bimero/random.hpp"

namespace bimero {
namespace {

using VecX = Eigen::VectorXcd;
using MatX = Eigen::MatrixXcd;

constexpr double kExclusion = 1e-9;

Vec3 lift(const Vec2& x, int chart) {
  Vec3 z;
  z(chart) = 1.0;
  z((chart + 1) % 3) = x(0);
  z((chart + 2) % 3) = x(1);
  return z;
}

struct Shooting {
  const ChartMap& g;
  int n;

  // Residual R_k = g(x_k) - x_{k+1}; false if some g(x_k) is undefined.
  bool residual(const VecX& x, VecX& r, MatX* jac) const {
    r.resize(2 * n);
    if (jac) *jac = MatX::Zero(2 * n, 2 * n);
    for (int k = 0; k < n; ++k) {
      Vec2 w;
      Mat2 j;
      if (!g.evaluate(x.segment<2>(2 * k), w, j)) return false;
      const int next = (k + 1) % n;
      r.segment<2>(2 * k) = w - x.segment<2>(2 * next);
      if (jac) {
        jac->block<2, 2>(2 * k, 2 * k) += j;
        jac->block<2, 2>(2 * k, 2 * next) -= Mat2::Identity();
      }
    }
    return true;
  }
};

// Lipschitz estimate of the chart Jacobian near x by central differences.
double jacobian_lipschitz(const ChartMap& g, const Vec2& x) {
  const double h = 1e-4 * (1 + x.norm());
  double m = 0;
  for (int d = 0; d < 4; ++d) {
    Vec2 e = Vec2::Zero();
    e(d / 2) = d % 2 == 0 ? Complex(h, 0) : Complex(0, h);
    Vec2 w;
    Mat2 jp, jm;
    if (!g.evaluate(x + e, w, jp) || !g.evaluate(x - e, w, jm)) return INFINITY;
    m = std::max(m, (jp - jm).norm() / (2 * h));
  }
  return m;
}

struct Found {
  std::vector<Vec2> orbit;
};

std::optional<Found> newton(const Shooting& s, VecX x, int iterations) {
  VecX r;
  MatX j;
  for (int it = 0; it < iterations; ++it) {
    if (!s.residual(x, r, &j)) return std::nullopt;
    const double scale = 1 + x.norm();
    if (r.norm() <= 1e-14 * scale) break;
    VecX step = j.partialPivLu().solve(-r);
    if (!step.allFinite()) return std::nullopt;
    const double limit = 0.5 * scale;
    if (step.norm() > limit) step *= limit / step.norm();
    x += step;
    if (x.norm() > 1e6) return std::nullopt;
  }
  if (!s.residual(x, r, nullptr) || r.norm() > 1e-10 * (1 + x.norm())) return std::nullopt;
  Found f;
  for (int k = 0; k < s.n; ++k) f.orbit.push_back(x.segment<2>(2 * k));
  return f;
}

}  // namespace

void WeightedPointCloud::set_uniform_weights() {
  numerators.assign(points.size(), 1);
  denominator = static_cast<long>(std::max<std::size_t>(points.size(), 1));
}

std::vector<PeriodicOrbit> periodic_orbits(const RationalSurfaceMap& f, int n, const SaddleSearchOptions& o) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  if (o.starts < 1 || !(o.box > 0)) throw Error(ErrorCode::InvalidArgument, "invalid search budget");
  const ChartMap g(f.numeric(), o.chart, o.chart);
  const Shooting shoot{g, n};
  const auto& ind = f.indeterminacy();
  const auto& ind_inv = f.has_inverse() ? f.inverse_indeterminacy() : ind;

  std::vector<std::optional<Found>> results(o.starts);
  parallel_for(
      static_cast<std::size_t>(o.starts),
      [&](std::size_t i) {
        auto rng = substream(o.seed ^ (static_cast<std::uint64_t>(n) << 40), i);
        std::uniform_real_distribution<double> u(-o.box, o.box);
        VecX x(2 * n);
        // Half the starts follow the forward orbit of a random point, half are independent.
        x.segment<2>(0) = Vec2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
        const bool follow = i % 2 == 0;
        for (int k = 1; k < n; ++k) {
          Vec2 w;
          Mat2 j;
          if (follow && g.evaluate(x.segment<2>(2 * (k - 1)), w, j) && w.norm() < 4 * o.box) {
            x.segment<2>(2 * k) = w;
          } else {
            x.segment<2>(2 * k) = Vec2(Complex(u(rng), u(rng)), Complex(u(rng), u(rng)));
          }
        }
        results[i] = newton(shoot, x, o.newton_iterations);
      },
      o.workers);

  std::vector<PeriodicOrbit> out;
  for (const auto& res : results) {
    if (!res) continue;
    const auto& orbit = res->orbit;
    std::vector<ProjectivePoint> pts;
    for (const auto& x : orbit) pts.emplace_back(lift(x, o.chart));
    // minimal period
    bool primitive = true;
    for (int m = 1; m < n && primitive; ++m) {
      if (n % m == 0 && proj_distance(pts[0], pts[m]) < o.dedupe) primitive = false;
    }
    if (!primitive) continue;
    bool excluded = false;
    for (const auto& p : pts) {
      excluded = excluded || distance_to_set(p, ind) < kExclusion || distance_to_set(p, ind_inv) < kExclusion;
    }
    if (excluded) continue;
    bool duplicate = false;
    for (const auto& existing : out) {
      if (existing.period != n) continue;
      for (const auto& q : existing.points) duplicate = duplicate || proj_distance(q, pts[0]) < o.dedupe;
    }
    if (duplicate) continue;

    PeriodicOrbit po;
    po.period = n;
    Mat2 d = Mat2::Identity();
    double lip = 0;
    for (const auto& x : orbit) {
      Vec2 w;
      Mat2 j;
      g.evaluate(x, w, j);
      d = j * d;
      lip = std::max(lip, jacobian_lipschitz(g, x));
    }
    const Eigen::ComplexEigenSolver<Mat2> es(d);
    const double a = std::abs(es.eigenvalues()(0));
    const double b = std::abs(es.eigenvalues()(1));
    po.lambda_max = std::max(a, b);
    po.lambda_min = std::min(a, b);
    po.saddle = po.lambda_max > 1 + o.saddle_gap && po.lambda_min < 1 - o.saddle_gap;

    // Chordal residual of f^n(x) = x through the homogeneous lift.
    for (std::size_t k = 0; k < pts.size(); ++k) {
      Vec3 z = pts[k].unit();
      for (int s = 0; s < n; ++s) z = f.numeric().evaluate(z / z.norm());
      po.residual = std::max(po.residual, proj_distance(ProjectivePoint(z), pts[k]));
    }
    if (po.residual > o.residual_tolerance) continue;

    // Kantorovich: beta K eta <= 1/2 for the shooting system.
    VecX x(2 * n), r;
    MatX j;
    for (int k = 0; k < n; ++k) x.segment<2>(2 * k) = orbit[k];
    shoot.residual(x, r, &j);
    const Eigen::JacobiSVD<MatX> svd(j);
    const double smin = svd.singularValues().tail(1)(0);
    if (smin > 0 && std::isfinite(lip)) {
      const double beta = 1 / smin;
      const double eta = j.partialPivLu().solve(r).norm();
      const double kk = 2 * std::max(lip, 1e-300);
      const double h = beta * kk * eta;
      if (h <= 0.5) {
        po.certified = true;
        po.certified_radius = (1 - std::sqrt(1 - 2 * h)) / (beta * kk);
        if (po.certified_radius == 0) po.certified_radius = eta;
      }
    }
    if (!po.certified) continue;
    po.points = std::move(pts);
    out.push_back(std::move(po));
  }
  std::sort(out.begin(), out.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    const Vec3& u = a.points[0].unit();
    const Vec3& v = b.points[0].unit();
    for (int i = 0; i < 3; ++i) {
      if (u(i).real() != v(i).real()) return u(i).real() < v(i).real();
      if (u(i).imag() != v(i).imag()) return u(i).imag() < v(i).imag();
    }
    return false;
  });
  return out;
}

namespace {

void append_saddles(WeightedPointCloud& cloud, const std::vector<PeriodicOrbit>& orbits) {
  int next_orbit = cloud.points.empty() ? 0 : cloud.points.back().orbit + 1;
  for (const auto& o : orbits) {
    if (!o.saddle) continue;
    for (const auto& p : o.points) {
      CloudPoint c;
      c.point = p;
      c.period = o.period;
      c.orbit = next_orbit;
      c.lambda_max = o.lambda_max;
      c.lambda_min = o.lambda_min;
      c.residual = o.residual;
      c.certified_radius = o.certified_radius;
      cloud.points.push_back(c);
    }
    ++next_orbit;
  }
}

void require_inverse(const RationalSurfaceMap& f) {
  if (!verify_inverse(f)) throw Error(ErrorCode::InvalidArgument, "stored inverse does not invert " + f.name());
}

}  // namespace

WeightedPointCloud saddle_periodic_points(const RationalSurfaceMap& f, int n, const SaddleSearchOptions& options) {
  require_inverse(f);
  WeightedPointCloud cloud;
  cloud.max_period = n;
  append_saddles(cloud, periodic_orbits(f, n, options));
  if (cloud.points.empty()) throw Error(ErrorCode::NoSaddlesFound, fmt::format("no saddle of period {}", n));
  cloud.set_uniform_weights();
  return cloud;
}

WeightedPointCloud saddle_cloud(const RationalSurfaceMap& f, int max_period, const SaddleSearchOptions& options) {
  if (max_period < 1) throw Error(ErrorCode::InvalidArgument, "period must be positive");
  require_inverse(f);
  WeightedPointCloud cloud;
  cloud.max_period = max_period;
  for (int n = 1; n <= max_period; ++n) append_saddles(cloud, periodic_orbits(f, n, options));
  if (cloud.points.empty()) {
    throw Error(ErrorCode::NoSaddlesFound, fmt::format("no saddle of period <= {}", max_period));
  }
  cloud.set_uniform_weights();
  return cloud;
}

double measure_average(const WeightedPointCloud& cloud, const Observable& phi) {
  if (cloud.points.empty()) throw Error(ErrorCode::InsufficientSamples, "empty cloud");
  double s = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) s += cloud.numerators[i] * phi(cloud.points[i].point);
  return s / cloud.denominator;
}

double measure_standard_error(const WeightedPointCloud& cloud, const Observable& phi) {
  const double mean = measure_average(cloud, phi);
  double var = 0, w2 = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double w = cloud.weight(i);
    const double d = phi(cloud.points[i].point) - mean;
    var += w * d * d;
    w2 += w * w;
  }
  return std::sqrt(var * w2);
}

namespace {

ProjectivePoint step(const RationalSurfaceMap& f, const ProjectivePoint& p, std::size_t index) {
  const Vec3 w = f.numeric().evaluate(p.unit());
  if (w.norm() <= kIndeterminacyTolerance * f.numeric().coefficient_norm()) {
    throw OrbitHitIndeterminacy(index, "cloud point " + p.to_string() + " maps into I(f)");
  }
  return ProjectivePoint(w);
}

}  // namespace

double invariance_residual(const RationalSurfaceMap& f, const WeightedPointCloud& cloud, const Observable& phi) {
  double before = 0, after = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    before += cloud.numerators[i] * phi(cloud.points[i].point);
    after += cloud.numerators[i] * phi(step(f, cloud.points[i].point, i));
  }
  return std::abs(after - before) / cloud.denominator;
}

double mixing_correlation(const RationalSurfaceMap& f, const WeightedPointCloud& cloud, const Observable& phi,
                          const Observable& psi, int n) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative lag");
  double joint = 0, a = 0, b = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    ProjectivePoint y = cloud.points[i].point;
    for (int k = 0; k < n; ++k) y = step(f, y, static_cast<std::size_t>(k));
    const double w = cloud.weight(i);
    const double pa = phi(cloud.points[i].point);
    const double pb = psi(y);
    joint += w * pa * pb;
    a += w * pa;
    b += w * pb;
  }
  return joint - a * b;
}

double ball_mass(const WeightedPointCloud& cloud, const ProjectivePoint& x, double r) {
  long num = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (proj_distance(cloud.points[i].point, x) < r) num += cloud.numerators[i];
  }
  return static_cast<double>(num) / cloud.denominator;
}

BallDecay ball_mass_decay(const WeightedPointCloud& cloud, double rho, double r0, int steps) {
  if (steps < 1 || !(rho > 1) || !(r0 > 0)) throw Error(ErrorCode::InvalidArgument, "invalid ball decay layout");
  BallDecay d;
  for (int n = 0; n <= steps; ++n) {
    const double r = r0 * std::pow(rho, -n / 2.0);
    double m = 0;
    for (std::size_t i = 0; i < cloud.size(); ++i) m += cloud.weight(i) * ball_mass(cloud, cloud.points[i].point, r);
    d.radii.push_back(r);
    d.masses.push_back(m);
  }
  double mx = steps / 2.0, my = 0;
  for (double m : d.masses) my += -std::log(m) / (steps + 1);
  double sxx = 0, sxy = 0;
  for (int n = 0; n <= steps; ++n) {
    sxx += (n - mx) * (n - mx);
    sxy += (n - mx) * (-std::log(d.masses[n]) - my);
  }
  d.exponent = sxy / sxx;
  return d;
}

namespace observables {

Observable hermitian_quadratic(const Mat3& a) {
  return [a](const ProjectivePoint& p) { return (p.unit().adjoint() * a * p.unit())(0).real(); };
}

Observable point_bump(const ProjectivePoint& center, double s) {
  return [center, s](const ProjectivePoint& p) {
    const double d = proj_distance(p, center);
    const double t = 1 - d * d / (s * s);
    return t > 0 ? t * t : 0.0;
  };
}

Observable line_tube(const Vec3& normal, double s) {
  const Vec3 n = normal / normal.norm();
  return [n, s](const ProjectivePoint& p) {
    const double d = std::abs(n.dot(p.unit()));
    const double t = 1 - d * d / (s * s);
    return t > 0 ? t * t : 0.0;
  };
}

std::vector<Observable> smooth_family(int count, std::uint64_t seed) {
  std::vector<Observable> out;
  auto rng = substream(seed, 0xfa111);
  std::normal_distribution<double> g;
  for (int i = 0; i < count; ++i) {
    Mat3 m;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) m(r, c) = Complex(g(rng), g(rng));
    }
    out.push_back(hermitian_quadratic((m + m.adjoint()) / 2.0));
  }
  return out;
}

}  // namespace observables

std::string cloud_to_csv(const WeightedPointCloud& cloud) {
  std::string s = "re0,im0,re1,im1,re2,im2,weight_num,weight_den,period,orbit,lambda_max,lambda_min\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const auto& c = cloud.points[i];
    const Vec3& u = c.point.unit();
    s += fmt::format("{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{},{},{},{:.17g},{:.17g}\n", u(0).real(),
                     u(0).imag(), u(1).real(), u(1).imag(), u(2).real(), u(2).imag(), cloud.numerators[i],
                     cloud.denominator, c.period, c.orbit, c.lambda_max, c.lambda_min);
  }
  return s;
}

}  // namespace bimero
