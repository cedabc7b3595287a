#include "bimero/energy.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bimero/error.hpp"
#include "bimero/parallel.hpp"

namespace bimero {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNegativeTolerance = 1e-12;

double min_eigenvalue(const Mat2& a) {
  const double p = a(0, 0).real();
  const double q = a(1, 1).real();
  return 0.5 * (p + q - std::sqrt((p - q) * (p - q) + 4 * std::norm(a(0, 1))));
}

void check_positive(const Mat2& t) {
  if (min_eigenvalue(t) < -kNegativeTolerance) {
    throw Error(ErrorCode::NonPositiveT, "form has eigenvalue " + std::to_string(min_eigenvalue(t)));
  }
}

// C^2 step from 1 (t <= 0) to 0 (t >= 1).
double falloff(double t) {
  if (t <= 0) return 1;
  if (t >= 1) return 0;
  return 1 - t * t * t * (10 - 15 * t + 6 * t * t);
}

// Shell cutoff around a pole: 1 for r <= R/2, 0 for r >= R.
double pole_cutoff(double r, double radius) { return falloff((r - radius / 2) / (radius / 2)); }

using Visitor = std::function<void(const Vec2&, double, double*)>;

// Sums visit(z, weight, acc) over a quadrature of the grid box. Around each
// pole the box rule is replaced by log-polar shells through a smooth
// partition of unity. Slab sums are reduced in index order.
std::vector<double> integrate(const GridChart& grid, const std::vector<Vec2>& poles, const ShellQuadrature& shells,
                              std::size_t n_acc, const Visitor& visit) {
  grid.validate();
  const int n = grid.resolution;
  const double dv = grid.cell_volume();
  const double radius = shells.outer_radius;
  std::vector<std::vector<double>> slabs(n, std::vector<double>(n_acc, 0.0));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i0) {
    double* acc = slabs[i0].data();
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        for (int i3 = 0; i3 < n; ++i3) {
          const Vec2 z = grid.node(static_cast<int>(i0), i1, i2, i3);
          double w = dv;
          for (const auto& a : poles) w *= 1 - pole_cutoff((z - a).norm(), radius);
          if (w > 0) visit(z, w, acc);
        }
      }
    }
  });
  std::vector<double> total(n_acc, 0.0);
  for (const auto& s : slabs) {
    for (std::size_t k = 0; k < n_acc; ++k) total[k] += s[k];
  }
  if (poles.empty()) return total;

  const double s0 = std::log(shells.inner_radius);
  const double s1 = std::log(radius);
  const double ds = (s1 - s0) / shells.radial;
  const double deta = (kPi / 2) / shells.polar;
  const double dxi = 2 * kPi / shells.azimuthal;
  for (const auto& a : poles) {
    std::vector<std::vector<double>> rows(shells.radial, std::vector<double>(n_acc, 0.0));
    parallel_for(static_cast<std::size_t>(shells.radial), [&](std::size_t k) {
      double* acc = rows[k].data();
      const double r = std::exp(s0 + (k + 0.5) * ds);
      for (int p = 0; p < shells.polar; ++p) {
        const double eta = (p + 0.5) * deta;
        const double base = std::pow(r, 4) * ds * std::cos(eta) * std::sin(eta) * deta * dxi * dxi;
        for (int m1 = 0; m1 < shells.azimuthal; ++m1) {
          for (int m2 = 0; m2 < shells.azimuthal; ++m2) {
            const Vec2 z = a + r * Vec2(std::cos(eta) * std::polar(1.0, m1 * dxi), std::sin(eta) * std::polar(1.0, m2 * dxi));
            double w = base * pole_cutoff(r, radius);
            for (const auto& b : poles) {
              if (&b != &a) w *= 1 - pole_cutoff((z - b).norm(), radius);
            }
            if (w > 0) visit(z, w, acc);
          }
        }
      }
    });
    for (const auto& s : rows) {
      for (std::size_t k = 0; k < n_acc; ++k) total[k] += s[k];
    }
  }
  return total;
}

void validate_poles(const GridChart& grid, const std::vector<Vec2>& poles, const ShellQuadrature& shells) {
  const Vec2 o = grid.origin();
  for (const auto& a : poles) {
    for (int i = 0; i < 2; ++i) {
      const Complex d = a(i) - o(i);
      if (std::max(std::abs(d.real()), std::abs(d.imag())) + shells.outer_radius > grid.half_width) {
        throw Error(ErrorCode::InvalidArgument, "pole shells leave the grid box");
      }
    }
  }
  if (!(shells.inner_radius > 0 && shells.inner_radius < shells.outer_radius) || shells.radial < 1 ||
      shells.polar < 1 || shells.azimuthal < 1) {
    throw Error(ErrorCode::InvalidArgument, "invalid shell quadrature");
  }
}

Mat2 levi_of(const SmoothFunction& f, const Vec2& z) {
  if (!f.levi) throw Error(ErrorCode::InvalidArgument, "function has no Levi matrix");
  return f.levi(z);
}

}  // namespace

void GridChart::validate() const {
  if (resolution < 8) throw Error(ErrorCode::InvalidArgument, "grid resolution must be at least 8");
  if (chart < 0 || chart > 2) throw Error(ErrorCode::InvalidArgument, "chart index must be 0, 1 or 2");
  if (!(half_width > 0)) throw Error(ErrorCode::InvalidArgument, "half-width must be positive");
  if (!to_chart(center.unit(), chart, 1e-12)) {
    throw Error(ErrorCode::InvalidArgument, "grid center lies on the line at infinity of its chart");
  }
}

Vec2 GridChart::origin() const {
  const auto w = to_chart(center.unit(), chart, 1e-12);
  if (!w) throw Error(ErrorCode::InvalidArgument, "grid center lies on the line at infinity of its chart");
  return *w;
}

double GridChart::cell_volume() const { return std::pow(spacing(), 4); }

std::size_t GridChart::size() const {
  const auto n = static_cast<std::size_t>(resolution);
  return n * n * n * n;
}

Vec2 GridChart::node(int i0, int i1, int i2, int i3) const {
  const Vec2 o = origin();
  const double h = spacing();
  auto c = [&](int i) { return -half_width + h * (i + 0.5); };
  return Vec2(o(0) + Complex(c(i0), c(i1)), o(1) + Complex(c(i2), c(i3)));
}

Vec3 GridChart::lift(const Vec2& w) const {
  Vec3 v;
  v(chart) = 1.0;
  v((chart + 1) % 3) = w(0);
  v((chart + 2) % 3) = w(1);
  return v / v.norm();
}

std::optional<Vec2> to_chart(const Vec3& z, int chart, double tol) {
  if (std::abs(z(chart)) <= tol * z.norm()) return std::nullopt;
  return Vec2(z((chart + 1) % 3) / z(chart), z((chart + 2) % 3) / z(chart));
}

DiscreteForm11 DiscreteForm11::sample(const FormField& t, const GridChart& grid) {
  grid.validate();
  DiscreteForm11 d;
  d.grid = grid;
  d.values.reserve(grid.size());
  const int n = grid.resolution;
  for (int i0 = 0; i0 < n; ++i0) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        for (int i3 = 0; i3 < n; ++i3) d.values.push_back(t(grid.node(i0, i1, i2, i3)));
      }
    }
  }
  return d;
}

double DiscreteForm11::min_eigenvalue() const {
  double m = INFINITY;
  for (const auto& a : values) m = std::min(m, bimero::min_eigenvalue(a));
  return m;
}

FormField DiscreteForm11::field() const {
  const GridChart g = grid;
  const auto vals = std::make_shared<std::vector<Mat2>>(values);
  return [g, vals](const Vec2& z) {
    const Vec2 o = g.origin();
    const double h = g.spacing();
    auto index = [&](double x) {
      return std::clamp(static_cast<int>(std::floor((x + g.half_width) / h)), 0, g.resolution - 1);
    };
    const Vec2 d = z - o;
    const std::size_t n = g.resolution;
    const std::size_t i = ((index(d(0).real()) * n + index(d(0).imag())) * n + index(d(1).real())) * n +
                          index(d(1).imag());
    return (*vals)[i];
  };
}

double wedge_density(const Mat2& a, const Mat2& b) { return 4 * (a.trace() * b.trace() - (a * b).trace()).real(); }

Mat2 gradient_form(const Vec2& g_phi, const Vec2& g_psi) {
  return (g_phi * g_psi.adjoint() + g_psi * g_phi.adjoint()) / (2 * kPi);
}

double energy(const SmoothFunction& phi, const SmoothFunction& psi, const FormField& t, const GridChart& grid) {
  return integrate(grid, {}, {}, 1, [&](const Vec2& z, double w, double* acc) {
    const Mat2 tz = t(z);
    check_positive(tz);
    acc[0] += w * wedge_density(gradient_form(phi.gradient(z), psi.gradient(z)), tz);
  })[0];
}

double energy(const SmoothFunction& phi, const FormField& t, const GridChart& grid) {
  return energy(phi, phi, t, grid);
}

double energy(const SmoothFunction& phi, const DiscreteForm11& t) {
  if (t.min_eigenvalue() < -kNegativeTolerance) throw Error(ErrorCode::NonPositiveT, "sampled form is not positive");
  return energy(phi, t.field(), t.grid);
}

double mass_integral(const std::function<double(const Vec2&)>& f, const FormField& t, const GridChart& grid) {
  const Mat2 beta = Mat2::Identity() / 2.0;
  return integrate(grid, {}, {}, 1, [&](const Vec2& z, double w, double* acc) {
    acc[0] += w * f(z) * wedge_density(beta, t(z));
  })[0];
}

double energy(const SingularFunction& phi, const SingularFunction& psi, const FormField& t, const GridChart& grid,
              const ShellQuadrature& shells) {
  std::vector<Vec2> poles = phi.poles;
  for (const auto& p : psi.poles) {
    if (std::none_of(poles.begin(), poles.end(), [&](const Vec2& q) { return (q - p).norm() < 1e-14; })) {
      poles.push_back(p);
    }
  }
  validate_poles(grid, poles, shells);
  return integrate(grid, poles, shells, 1, [&](const Vec2& z, double w, double* acc) {
    const Mat2 tz = t(z);
    check_positive(tz);
    acc[0] += w * wedge_density(gradient_form(phi.u.gradient(z), psi.u.gradient(z)), tz);
  })[0];
}

double regularization_profile(double t, double delta) {
  const double tau = t / delta;
  if (tau <= -1) return 0;
  if (tau >= 1) return t;
  const double cdf = (15.0 / 16) * (tau - 2 * tau * tau * tau / 3 + std::pow(tau, 5) / 5 + 8.0 / 15);
  const double first = (15.0 / 16) * (tau * tau / 2 - std::pow(tau, 4) / 2 + std::pow(tau, 6) / 6 - 1.0 / 6);
  return delta * (tau * cdf - first);
}

namespace {

double profile_slope(double t, double delta) {
  const double tau = t / delta;
  if (tau <= -1) return 0;
  if (tau >= 1) return 1;
  return (15.0 / 16) * (tau - 2 * tau * tau * tau / 3 + std::pow(tau, 5) / 5 + 8.0 / 15);
}

double profile_curvature(double t, double delta) {
  const double tau = t / delta;
  if (tau <= -1 || tau >= 1) return 0;
  return (15.0 / 16) * (1 - tau * tau) * (1 - tau * tau) / delta;
}

}  // namespace

SmoothFunction regularize(const SmoothFunction& u, double j, double delta) {
  if (!(delta > 0) || j < 0) throw Error(ErrorCode::InvalidArgument, "regularize needs j >= 0 and delta > 0");
  SmoothFunction r;
  r.value = [u, j, delta](const Vec2& z) {
    const double v = u.value(z);
    if (v == -INFINITY) return -j;
    return regularization_profile(v + j, delta) - j;
  };
  r.gradient = [u, j, delta](const Vec2& z) -> Vec2 {
    const double s = profile_slope(u.value(z) + j, delta);
    if (s == 0) return Vec2::Zero();
    return s * u.gradient(z);
  };
  if (u.levi) {
    r.levi = [u, j, delta](const Vec2& z) -> Mat2 {
      const double t = u.value(z) + j;
      const double s = profile_slope(t, delta);
      if (s == 0) return Mat2::Zero();
      const Vec2 g = u.gradient(z);
      return s * u.levi(z) + profile_curvature(t, delta) * (g * g.adjoint());
    };
  }
  return r;
}

double fit_psh_constant(const SmoothFunction& w, const GridChart& grid) {
  grid.validate();
  const int n = grid.resolution;
  double m = 0;
  for (int i0 = 0; i0 < n; ++i0) {
    for (int i1 = 0; i1 < n; ++i1) {
      for (int i2 = 0; i2 < n; ++i2) {
        for (int i3 = 0; i3 < n; ++i3) {
          m = std::max(m, -2 * min_eigenvalue(levi_of(w, grid.node(i0, i1, i2, i3))) / kPi);
        }
      }
    }
  }
  return m;
}

ComparisonResiduals energy_comparison(const SmoothFunction& u, const SmoothFunction& v, double c, const FormField& t,
                            const GridChart& grid) {
  const Mat2 beta = Mat2::Identity() / 2.0;
  // acc: E(u,v), E(v,v), E(u,u), int (v-u) beta^T, premise violations
  const auto acc = integrate(grid, {}, {}, 5, [&](const Vec2& z, double w, double* a) {
    const Mat2 tz = t(z);
    check_positive(tz);
    const Vec2 gu = u.gradient(z);
    const Vec2 gv = v.gradient(z);
    const double gap = v.value(z) - u.value(z);
    if (gap < -1e-12 || min_eigenvalue(levi_of(u, z) / kPi + c * beta) < -1e-10 ||
        min_eigenvalue(levi_of(v, z) / kPi + c * beta) < -1e-10) {
      a[4] += 1;
    }
    a[0] += w * wedge_density(gradient_form(gu, gv), tz);
    a[1] += w * wedge_density(gradient_form(gv, gv), tz);
    a[2] += w * wedge_density(gradient_form(gu, gu), tz);
    a[3] += w * gap * wedge_density(beta, tz);
  });
  if (acc[4] > 0) {
    throw Error(ErrorCode::PremiseViolated,
                "premises fail at " + std::to_string(static_cast<long>(acc[4])) + " grid nodes");
  }
  ComparisonResiduals r;
  r.lower = acc[0] - acc[1] + c * acc[3];
  r.upper = c * acc[3] - (acc[0] - acc[2]);
  return r;
}

CauchyReport cauchy_diagnostic(const SingularFunction& u, const FormField& t, const GridChart& grid,
                               const std::vector<double>& levels, double delta, const ShellQuadrature& shells) {
  if (levels.size() < 2) throw Error(ErrorCode::InsufficientSamples, "need at least two levels");
  validate_poles(grid, u.poles, shells);
  const std::size_t n = levels.size();
  std::vector<SmoothFunction> reg;
  for (double j : levels) reg.push_back(regularize(u.u, j, delta));
  const std::size_t pairs = n * (n - 1) / 2;
  const auto acc = integrate(grid, u.poles, shells, pairs + n, [&](const Vec2& z, double w, double* a) {
    const Mat2 tz = t(z);
    check_positive(tz);
    std::vector<Vec2> g(n);
    for (std::size_t k = 0; k < n; ++k) g[k] = reg[k].gradient(z);
    std::size_t idx = 0;
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k, ++idx) {
        const Vec2 d = g[j] - g[k];
        if (d.squaredNorm() > 0) a[idx] += w * wedge_density(gradient_form(d, d), tz);
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (g[k].squaredNorm() > 0) a[pairs + k] += w * wedge_density(gradient_form(g[k], g[k]), tz);
    }
  });
  CauchyReport r;
  r.levels = levels;
  r.differences.assign(n, std::vector<double>(n, 0.0));
  std::size_t idx = 0;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k, ++idx) {
      r.differences[j][k] = r.differences[k][j] = std::sqrt(std::max(0.0, acc[idx]));
    }
  }
  for (std::size_t k = 0; k < n; ++k) r.norms.push_back(std::sqrt(std::max(0.0, acc[pairs + k])));

  std::vector<double> consecutive;
  for (std::size_t k = 0; k + 1 < n; ++k) consecutive.push_back(r.differences[k][k + 1]);
  const std::size_t start = consecutive.size() / 2;
  const bool vanish = std::all_of(consecutive.begin() + start, consecutive.end(), [](double d) { return d < 1e-12; });
  r.consecutive_decreasing = true;
  for (std::size_t k = start + 1; k < consecutive.size(); ++k) {
    r.consecutive_decreasing = r.consecutive_decreasing && consecutive[k] <= consecutive[k - 1];
  }
  if (vanish) {
    r.tail_ratio = 0;
    r.cauchy = true;
    return r;
  }
  double mx = 0, my = 0, m = 0;
  for (std::size_t k = start; k < consecutive.size(); ++k) {
    mx += k;
    my += std::log(std::max(consecutive[k], 1e-300));
    m += 1;
  }
  mx /= m;
  my /= m;
  double sxx = 0, sxy = 0;
  for (std::size_t k = start; k < consecutive.size(); ++k) {
    sxx += (k - mx) * (k - mx);
    sxy += (k - mx) * (std::log(std::max(consecutive[k], 1e-300)) - my);
  }
  r.tail_ratio = sxx > 0 ? std::exp(sxy / sxx) : 1.0;
  r.cauchy = r.consecutive_decreasing && r.tail_ratio < 0.75;
  return r;
}

ChartMap::ChartMap(const NumericMap& lift, int source_chart, int target_chart)
    : lift_(lift), source_(source_chart), target_(target_chart) {
  if (source_chart < 0 || source_chart > 2 || target_chart < 0 || target_chart > 2) {
    throw Error(ErrorCode::InvalidArgument, "chart index must be 0, 1 or 2");
  }
}

bool ChartMap::evaluate(const Vec2& x, Vec2& w, Mat2& jacobian) const {
  Vec3 z;
  z(source_) = 1.0;
  z((source_ + 1) % 3) = x(0);
  z((source_ + 2) % 3) = x(1);
  const Vec3 f = lift_.evaluate(z);
  const double scale = f.norm();
  if (scale == 0.0 || std::abs(f(target_)) <= 1e-12 * scale) return false;
  const Mat3 jf = lift_.jacobian(z);
  const Complex q = f(target_);
  for (int a = 0; a < 2; ++a) {
    const int ta = (target_ + 1 + a) % 3;
    w(a) = f(ta) / q;
    for (int b = 0; b < 2; ++b) {
      const int sb = (source_ + 1 + b) % 3;
      jacobian(a, b) = (jf(ta, sb) * q - f(ta) * jf(target_, sb)) / (q * q);
    }
  }
  return true;
}

PushforwardReport pushforward_energy_check(const SingularFunction& u, const RationalSurfaceMap& f,
                                           const FormField& t, const GridChart& source, const GridChart& target,
                                           const ShellQuadrature& shells) {
  const ChartMap forward(f.numeric(), source.chart, target.chart);
  const ChartMap backward(f.numeric_inverse(), target.chart, source.chart);
  auto fail = [](const Vec2& z) {
    throw Error(ErrorCode::ChartMeetsExceptionalSet,
                "chart node (" + std::to_string(z(0).real()) + ", " + std::to_string(z(1).real()) +
                    ", ...) meets I(f) or C(f)");
  };
  // Curves the chart map must stay away from: critical curves of the map and
  // the preimage of the target's line at infinity.
  std::vector<NumericPolynomial> forward_guard{f.numeric().component(target.chart)};
  for (const auto& c : f.critical_factors()) forward_guard.emplace_back(c.factor);
  std::vector<NumericPolynomial> backward_guard{f.numeric_inverse().component(source.chart)};
  for (const auto& c : f.inverse_critical_factors()) backward_guard.emplace_back(c.factor);
  auto guard = [&](const std::vector<NumericPolynomial>& curves, const GridChart& grid, const Vec2& x) {
    Vec3 z;
    z(grid.chart) = 1.0;
    z((grid.chart + 1) % 3) = x(0);
    z((grid.chart + 2) % 3) = x(1);
    for (const auto& p : curves) {
      const Vec3 g = p.gradient(z);
      const double slope = std::hypot(std::abs(g((grid.chart + 1) % 3)), std::abs(g((grid.chart + 2) % 3)));
      if (std::abs(p.evaluate(z)) < slope * grid.spacing()) fail(x);
    }
  };
  std::vector<Vec2> source_poles;
  for (const auto& p : u.poles) {
    Vec2 x;
    Mat2 k;
    if (!backward.evaluate(p, x, k)) fail(p);
    source_poles.push_back(x);
  }
  if (!u.poles.empty()) {
    validate_poles(source, source_poles, shells);
    validate_poles(target, u.poles, shells);
  }
  PushforwardReport r;
  r.pulled = integrate(source, source_poles, shells, 1, [&](const Vec2& x, double w, double* acc) {
    Vec2 y;
    Mat2 j;
    guard(forward_guard, source, x);
    if (!forward.evaluate(x, y, j) || std::abs(j.determinant()) < 1e-12) fail(x);
    const Vec2 gu = u.u.gradient(y);
    if (gu.squaredNorm() == 0) return;
    const Vec2 g = j.transpose() * gu;
    const Mat2 tx = t(x);
    check_positive(tx);
    acc[0] += w * wedge_density(gradient_form(g, g), tx);
  })[0];
  r.pushed = integrate(target, u.poles, shells, 1, [&](const Vec2& y, double w, double* acc) {
    const Vec2 gu = u.u.gradient(y);
    if (gu.squaredNorm() == 0) return;
    Vec2 x;
    Mat2 k;
    guard(backward_guard, target, y);
    if (!backward.evaluate(y, x, k) || std::abs(k.determinant()) < 1e-12) fail(y);
    const Mat2 tx = t(x);
    check_positive(tx);
    const Mat2 pushed = k.transpose() * tx * k.conjugate();
    acc[0] += w * wedge_density(gradient_form(gu, gu), pushed);
  })[0];
  const double scale = std::max(std::abs(r.pulled), std::abs(r.pushed));
  r.relative = scale > 0 ? std::abs(r.pushed - r.pulled) / scale : 0.0;
  return r;
}

PushforwardReport pushforward_energy_check(const SmoothFunction& u, const RationalSurfaceMap& f, const FormField& t,
                                           const GridChart& source, const GridChart& target) {
  return pushforward_energy_check(SingularFunction{u, {}}, f, t, source, target, ShellQuadrature{});
}

}  // namespace bimero
