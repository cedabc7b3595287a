#include "bimero/potential.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "bimero/error.hpp"
#include "bimero/random.hpp"

namespace bimero {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct LineFit {
  double slope = 0, intercept = 0, rms = 0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += r * r;
  }
  f.rms = std::sqrt(ss / n);
  return f;
}

// Scales w by an exact power of two so that its largest modulus lies in [1/2, 1).
int normalize_pow2(Vec3& w) {
  const double m = w.cwiseAbs().maxCoeff();
  int e = 0;
  std::frexp(m, &e);
  for (int i = 0; i < 3; ++i) w(i) = Complex(std::ldexp(w(i).real(), -e), std::ldexp(w(i).imag(), -e));
  return e;
}

Vec3 tangent_direction(std::mt19937_64& rng) { return gaussian_vec3(rng); }

// Local search over directions on the sphere of radius r around q for the
// extreme of sign * u, starting from dir.
double refine_extreme(const std::function<double(const ProjectivePoint&)>& u, const ProjectivePoint& q, Vec3 dir,
                      double r, double sign, std::mt19937_64& rng) {
  const Eigen::Matrix<Complex, 3, 2> frame = orthonormal_complement(q.unit());
  Vec2 t = frame.adjoint() * dir;
  t /= t.norm();
  double best = sign * u(point_at_distance(q, frame * t, r));
  std::normal_distribution<double> n;
  double step = 0.5;
  int failures = 0;
  while (step > 1e-6) {
    Vec2 c = t + step * Vec2(Complex(n(rng), n(rng)), Complex(n(rng), n(rng)));
    c /= c.norm();
    const double v = sign * u(point_at_distance(q, frame * c, r));
    if (v > best) {
      best = v;
      t = c;
      failures = 0;
    } else if (++failures == 12) {
      step *= 0.5;
      failures = 0;
    }
  }
  return sign * best;
}

}  // namespace

PotentialEvaluator::PotentialEvaluator(const RationalSurfaceMap& f, double rho, Direction direction, double eps)
    : map_(direction == Direction::Forward ? f : f.inverted()),
      lift_(nullptr),
      rho_(rho),
      direction_(direction),
      eps_(eps) {
  if (!(rho > 0) || !std::isfinite(rho)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
  if (direction == Direction::Backward && !verify_inverse(f)) {
    throw Error(ErrorCode::InvalidArgument, "stored inverse does not invert " + f.name());
  }
  lift_ = &map_.numeric();
}

double PotentialEvaluator::gamma(const ProjectivePoint& p) const { return gamma(p.unit()); }

double PotentialEvaluator::gamma(const Vec3& unit) const {
  const double n = lift_->evaluate(unit).norm();
  return n == 0.0 ? kNegInf : std::log(n) / rho_;
}

double PotentialEvaluator::green_partial(const ProjectivePoint& p, int n) const {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative truncation");
  const double threshold = eps_ * lift_->coefficient_norm();
  Vec3 z = p.unit();
  double sum = 0.0;
  double weight = 1.0;
  for (int j = 0; j < n; ++j) {
    const Vec3 w = lift_->evaluate(z);
    const double norm = w.norm();
    if (norm == 0.0) return kNegInf;
    if (norm <= threshold) throw OrbitHitIndeterminacy(j, "orbit within tolerance of I(f) at step " + std::to_string(j));
    sum += weight * std::log(norm) / rho_;
    weight /= rho_;
    z = w / norm;
  }
  return sum;
}

double PotentialEvaluator::green_telescoped(const ProjectivePoint& p, int n) const {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "negative truncation");
  if (n == 0) return 0.0;
  const double d = map_.degree();
  Vec3 v = p.unit();
  // s = rho^{-k} log(lambda_k) where F^k(z) = lambda_k v_k.
  double s = 0.0;
  double inv_pow = 1.0;
  for (int k = 0; k < n; ++k) {
    Vec3 w = lift_->evaluate(v);
    if (w.cwiseAbs().maxCoeff() == 0.0) return kNegInf;
    const int e = normalize_pow2(w);
    inv_pow /= rho_;
    s = (d / rho_) * s + inv_pow * e * std::log(2.0);
    v = w;
  }
  return s + inv_pow * std::log(v.norm());
}

PotentialEvaluator::FunctionalCheck PotentialEvaluator::functional_check(const ProjectivePoint& p, int n) const {
  const Vec3 w = lift_->evaluate(p.unit());
  if (w.norm() == 0.0) throw OrbitHitIndeterminacy(0, "point lies in I(f)");
  const ProjectivePoint fp(w);
  FunctionalCheck c;
  c.residual = std::abs(green_telescoped(fp, n) - rho_ * (green_partial(p, n + 1) - gamma(p)));
  const double tail = rho_ > 1 ? rho_ / (rho_ - 1) : static_cast<double>(n + 1);
  c.tail_bound = std::pow(rho_, -n) * orbit_gamma_max(p, n + 1) * tail;
  return c;
}

double PotentialEvaluator::orbit_gamma_max(const ProjectivePoint& p, int n) const {
  Vec3 z = p.unit();
  double m = 0.0;
  for (int j = 0; j < n; ++j) {
    const Vec3 w = lift_->evaluate(z);
    const double norm = w.norm();
    if (norm == 0.0) return std::numeric_limits<double>::infinity();
    m = std::max(m, std::abs(std::log(norm) / rho_));
    z = w / norm;
  }
  return m;
}

bool SingularityFit::contains(double log_distance, double value, double slack) const {
  return value >= A * log_distance - B - slack && value <= A_prime * log_distance + B_prime + slack;
}

std::vector<ShellSample> shell_samples(const std::function<double(const ProjectivePoint&)>& u, const ProjectivePoint& q,
                                       const std::vector<double>& radii, int per_shell, std::uint64_t seed) {
  std::vector<ShellSample> out;
  out.reserve(radii.size() * static_cast<std::size_t>(per_shell));
  for (std::size_t s = 0; s < radii.size(); ++s) {
    auto rng = substream(seed, s);
    for (int k = 0; k < per_shell; ++k) {
      const ProjectivePoint x = point_at_distance(q, tangent_direction(rng), radii[s]);
      out.push_back({std::log(proj_distance(x, q)), u(x)});
    }
  }
  return out;
}

SingularityFit singularity_fit(const PotentialEvaluator& ev, const ProjectivePoint& q, const std::vector<double>& radii,
                               int per_shell, std::uint64_t seed) {
  if (radii.size() < 3 || per_shell < 1) throw Error(ErrorCode::InsufficientSamples, "need at least 3 radii");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] >= 1e-7 && radii[i] < 1)) throw Error(ErrorCode::InsufficientSamples, "radius outside [1e-7, 1)");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw Error(ErrorCode::InsufficientSamples, "radii must decrease");
  }
  const NumericMap& f = ev.map().numeric();
  if (f.evaluate(q.unit()).norm() > 1e-6 * f.coefficient_norm()) {
    throw Error(ErrorCode::InvalidArgument, "point is not in I(f): " + q.to_string());
  }
  const auto u = [&](const ProjectivePoint& x) { return ev.gamma(x); };
  const auto samples = shell_samples(u, q, radii, per_shell, seed);

  SingularityFit fit;
  fit.point = q;
  fit.radii = radii;
  fit.samples = samples.size();
  std::vector<double> xs, ys, shell_x, shell_lo, shell_hi;
  for (std::size_t s = 0; s < radii.size(); ++s) {
    auto rng = substream(seed, s);
    std::vector<Vec3> dirs;
    for (int k = 0; k < per_shell; ++k) dirs.push_back(tangent_direction(rng));
    std::size_t arg_lo = 0, arg_hi = 0;
    double lx = 0;
    for (int k = 0; k < per_shell; ++k) {
      const auto& smp = samples[s * per_shell + k];
      xs.push_back(smp.log_distance);
      ys.push_back(smp.value);
      if (smp.value < samples[s * per_shell + arg_lo].value) arg_lo = k;
      if (smp.value > samples[s * per_shell + arg_hi].value) arg_hi = k;
      lx += smp.log_distance;
    }
    auto search = substream(seed, radii.size() + s);
    shell_x.push_back(lx / per_shell);
    shell_lo.push_back(std::min(samples[s * per_shell + arg_lo].value,
                                refine_extreme(u, q, dirs[arg_lo], radii[s], -1.0, search)));
    shell_hi.push_back(std::max(samples[s * per_shell + arg_hi].value,
                                refine_extreme(u, q, dirs[arg_hi], radii[s], 1.0, search)));
  }
  const LineFit all = fit_line(xs, ys);
  fit.ls_slope = all.slope;
  fit.ls_intercept = all.intercept;
  fit.ls_rms = all.rms;
  fit.A = fit_line(shell_x, shell_lo).slope;
  fit.A_prime = fit_line(shell_x, shell_hi).slope;
  fit.B = -INFINITY;
  fit.B_prime = -INFINITY;
  for (std::size_t s = 0; s < radii.size(); ++s) {
    const double lr = std::log(radii[s]);
    fit.B = std::max(fit.B, fit.A * lr - shell_lo[s]);
    fit.B_prime = std::max(fit.B_prime, shell_hi[s] - fit.A_prime * lr);
  }
  for (const auto& smp : samples) {
    fit.B = std::max(fit.B, fit.A * smp.log_distance - smp.value);
    fit.B_prime = std::max(fit.B_prime, smp.value - fit.A_prime * smp.log_distance);
  }
  return fit;
}

double lelong_estimate(std::vector<ShellMean> shells) {
  if (shells.size() < 4) throw Error(ErrorCode::InsufficientSamples, "need at least 4 shells");
  std::sort(shells.begin(), shells.end(), [](const ShellMean& a, const ShellMean& b) { return a.radius < b.radius; });
  std::vector<double> x, y;
  for (std::size_t i = 0; i < 4; ++i) {
    x.push_back(std::log(shells[i].radius));
    y.push_back(shells[i].mean);
  }
  return std::max(0.0, fit_line(x, y).slope);
}

std::vector<ShellMean> shell_means(const std::function<double(const ProjectivePoint&)>& u, const ProjectivePoint& x,
                                   const LelongOptions& o) {
  if (o.shells < 4 || o.samples_per_shell < 1 || !(o.r_min > 0 && o.r_min < o.r_max && o.r_max < 1)) {
    throw Error(ErrorCode::InsufficientSamples, "invalid shell layout");
  }
  std::vector<double> radii;
  for (int s = 0; s < o.shells; ++s) {
    radii.push_back(o.r_max * std::pow(o.r_min / o.r_max, static_cast<double>(s) / (o.shells - 1)));
  }
  const auto samples = shell_samples(u, x, radii, o.samples_per_shell, o.seed);
  std::vector<ShellMean> out;
  for (std::size_t s = 0; s < radii.size(); ++s) {
    double sum = 0;
    for (int k = 0; k < o.samples_per_shell; ++k) sum += samples[s * o.samples_per_shell + k].value;
    out.push_back({radii[s], sum / o.samples_per_shell});
  }
  return out;
}

ClassPotentials p2_class_potentials(const RationalSurfaceMap& f) {
  auto lift = std::make_shared<NumericMap>(f.numeric());
  ClassPotentials p;
  p.gamma = [lift](int, const Vec3& z) {
    const double n = lift->evaluate(z).norm();
    return n == 0.0 ? kNegInf : std::log(n);
  };
  p.step = [lift](const Vec3& z) -> Vec3 {
    const Vec3 w = lift->evaluate(z);
    const double n = w.norm();
    if (n == 0.0) throw OrbitHitIndeterminacy(0, "orbit reached I(f)");
    return w / n;
  };
  return p;
}

double gn_eta(const CohomologyLattice& lattice, double rho, const ClassPotentials& potentials, const RealVector& eta,
              const std::function<double(const Vec3&)>& p_eta, const ProjectivePoint& x, int n) {
  if (eta.size() != lattice.rank) throw Error(ErrorCode::InvalidArgument, "class has wrong rank");
  if (n < 0 || !(rho > 0)) throw Error(ErrorCode::InvalidArgument, "invalid truncation or rho");
  std::vector<Vec3> orbit{x.unit()};
  for (int j = 0; j < n; ++j) orbit.push_back(potentials.step(orbit.back()));
  const Eigen::MatrixXd M = lattice.Mf.cast<double>();
  RealVector c = eta;
  double sum = p_eta ? p_eta(orbit[n]) : 0.0;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < lattice.rank; ++k) {
      if (c(k) != 0.0) sum += c(k) * potentials.gamma(k, orbit[n - j - 1]);
    }
    c = M * c;
  }
  return sum * std::pow(rho, -n);
}

double monte_carlo_l1(const std::function<double(const ProjectivePoint&)>& a,
                      const std::function<double(const ProjectivePoint&)>& b, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorCode::InsufficientSamples, "no samples");
  auto rng = substream(seed, 0);
  double sum = 0;
  for (int i = 0; i < samples; ++i) {
    const ProjectivePoint x = uniform_point(rng);
    sum += std::abs(a(x) - (b ? b(x) : 0.0));
  }
  return sum / samples;
}

Vec3 ChartSlice::point(int i, int j) const {
  const double step = resolution > 1 ? 2 * half_width / (resolution - 1) : 0.0;
  const Complex a(u1.real() - half_width + step * i, u1.imag());
  const Complex b(u2.real() - half_width + step * j, u2.imag());
  Vec3 v;
  v(chart) = 1.0;
  v((chart + 1) % 3) = a;
  v((chart + 2) % 3) = b;
  return v / v.norm();
}

std::vector<double> sample_slice(const ChartSlice& slice, const std::function<double(const Vec3&)>& fn) {
  if (slice.resolution < 1 || slice.chart < 0 || slice.chart > 2) {
    throw Error(ErrorCode::InvalidArgument, "invalid chart slice");
  }
  std::vector<double> out(static_cast<std::size_t>(slice.resolution) * slice.resolution);
  for (int j = 0; j < slice.resolution; ++j) {
    for (int i = 0; i < slice.resolution; ++i) out[static_cast<std::size_t>(j) * slice.resolution + i] = fn(slice.point(i, j));
  }
  return out;
}

PgmScale write_pgm(const std::string& path, const std::vector<double>& values, int width, int height) {
  if (width < 1 || height < 1 || values.size() != static_cast<std::size_t>(width) * height) {
    throw Error(ErrorCode::InvalidArgument, "image size mismatch");
  }
  PgmScale s;
  s.min = INFINITY;
  s.max = -INFINITY;
  for (double v : values) {
    if (!std::isfinite(v)) {
      ++s.non_finite;
      continue;
    }
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  if (s.non_finite == values.size()) s.min = s.max = 0;
  s.offset = s.min;
  s.scale = s.max > s.min ? (s.max - s.min) / 65535.0 : 0.0;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + path);
  out << "P5\n" << width << ' ' << height << "\n65535\n";
  for (double v : values) {
    unsigned level = 0;
    if (std::isfinite(v) && s.scale > 0) level = static_cast<unsigned>(std::lround((v - s.min) / s.scale));
    const char bytes[2] = {static_cast<char>((level >> 8) & 0xff), static_cast<char>(level & 0xff)};
    out.write(bytes, 2);
  }
  if (!out) throw Error(ErrorCode::InvalidArgument, "write failed for " + path);
  return s;
}

}  // namespace bimero
