#include "bimero/stability.hpp"

#include <Eigen/SVD>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "bimero/error.hpp"
#include "bimero/parallel.hpp"

namespace bimero {
namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;
using QComplex = boost::multiprecision::cpp_complex_quad;
using QVec = std::array<QComplex, 3>;

constexpr double kQuadRounding = 1e-32;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

Quad to_quad(const mpq_class& q) {
  return Quad(q.get_num().get_str()) / Quad(q.get_den().get_str());
}

QComplex to_quad(const GaussianRational& c) { return QComplex(to_quad(c.re()), to_quad(c.im())); }

QVec to_quad(const ExactPoint& p) { return {to_quad(p[0]), to_quad(p[1]), to_quad(p[2])}; }

QVec to_quad(const Vec3& v) {
  return {QComplex(v(0).real(), v(0).imag()), QComplex(v(1).real(), v(1).imag()), QComplex(v(2).real(), v(2).imag())};
}

Vec3 to_double(const QVec& v) {
  Vec3 r;
  for (int i = 0; i < 3; ++i) {
    r(i) = Complex(static_cast<double>(v[i].real()), static_cast<double>(v[i].imag()));
  }
  return r;
}

Quad norm2(const QVec& v) {
  Quad s = 0;
  for (const auto& c : v) s += c.real() * c.real() + c.imag() * c.imag();
  return s;
}

QVec normalized(const QVec& v) {
  const Quad n = sqrt(norm2(v));
  return {v[0] / n, v[1] / n, v[2] / n};
}

// Chordal distance |a x b| of unit vectors, evaluated in quad precision.
double quad_distance(const QVec& a, const QVec& b) {
  const QVec c{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  return std::min(1.0, static_cast<double>(sqrt(norm2(c))));
}

class QuadMap {
 public:
  explicit QuadMap(const PolyTriple& f) {
    for (int i = 0; i < 3; ++i) {
      for (const auto& [e, c] : f[i].terms()) terms_[i].push_back({e, to_quad(c)});
    }
  }

  QVec evaluate(const QVec& z) const {
    QVec out;
    for (int i = 0; i < 3; ++i) {
      QComplex acc(0);
      for (const auto& [e, c] : terms_[i]) {
        QComplex m = c;
        for (int v = 0; v < 3; ++v) {
          for (int k = 0; k < e[v]; ++k) m *= z[v];
        }
        acc += m;
      }
      out[i] = acc;
    }
    return out;
  }

 private:
  std::array<std::vector<std::pair<Exponent, QComplex>>, 3> terms_;
};

struct Target {
  std::vector<IndeterminacyPoint> points;
  std::vector<QVec> quad;
};

Target make_target(const std::vector<IndeterminacyPoint>& pts) {
  Target t{pts, {}};
  for (const auto& p : pts) t.quad.push_back(p.exact ? normalized(to_quad(*p.exact)) : to_quad(p.point.unit()));
  return t;
}

double distance_exact(const ExactPoint& p, const Target& t, bool& hit) {
  double d = 1.0;
  const QVec q = normalized(to_quad(p));
  for (std::size_t k = 0; k < t.points.size(); ++k) {
    if (t.points[k].exact && *t.points[k].exact == p) {
      hit = true;
      return 0.0;
    }
    d = std::min(d, quad_distance(q, t.quad[k]));
  }
  return d;
}

double distance_quad(const QVec& unit, const Target& t) {
  double d = 1.0;
  for (const auto& q : t.quad) d = std::min(d, quad_distance(unit, q));
  return d;
}

Orbit trace_orbit(const RationalSurfaceMap& f, const IndeterminacyPoint& source, const Target& target, int n,
                  const StabilityOptions& opt, const QuadMap& qmap) {
  Orbit orbit{source, {}, std::nullopt, std::nullopt};
  std::optional<ExactPoint> exact = source.exact;
  QVec unit = exact ? normalized(to_quad(*exact)) : to_quad(source.point.unit());
  double error = exact ? 0.0 : kQuadRounding;
  StepKind kind = StepKind::Point;
  if (!exact) orbit.numeric_from = 0;

  for (int step = 0; step <= n; ++step) {
    OrbitStep s;
    s.n = step;
    s.kind = kind;
    s.exact = exact;
    s.point = ProjectivePoint(to_double(unit));
    s.error_radius = error;
    bool hit = false;
    if (exact) {
      s.distance = distance_exact(*exact, target, hit);
    } else {
      s.distance = distance_quad(unit, target);
    }
    hit = hit || s.distance <= opt.eps;
    orbit.steps.push_back(s);
    if (hit) {
      orbit.hit = step;
      if (step < n) {
        OrbitStep ind;
        ind.n = step + 1;
        ind.kind = StepKind::Indeterminate;
        ind.point = s.point;
        ind.distance = std::numeric_limits<double>::quiet_NaN();
        orbit.steps.push_back(ind);
      }
      return orbit;
    }
    if (step == n) break;

    kind = StepKind::Point;
    if (exact) {
      const MapImage img = apply(f, *exact);
      if (const auto* p = std::get_if<ImagePoint>(&img)) {
        exact = p->exact;
      } else if (const auto* c = std::get_if<Collapsed>(&img)) {
        exact = c->image.exact;
        kind = StepKind::Collapsed;
      } else {
        throw Error(ErrorCode::InvalidArgument, "exact orbit reached I(f) without a recorded hit");
      }
      if (exact->bit_size() > opt.max_point_bits) {
        unit = normalized(to_quad(*exact));
        exact.reset();
        error = kQuadRounding;
        orbit.numeric_from = step + 1;
      } else {
        unit = normalized(to_quad(*exact));
      }
    } else {
      // First-order propagation of the chordal error radius through Df.
      const Mat2 d = tangent_map(f.numeric(), to_double(unit));
      const double lip = Eigen::JacobiSVD<Mat2>(d).singularValues()(0);
      const QVec w = qmap.evaluate(unit);
      if (sqrt(norm2(w)) <= Quad(opt.eps * f.numeric().coefficient_norm())) {
        throw Error(ErrorCode::NumericUnderflow, "numeric orbit reached I(f) without a recorded hit");
      }
      unit = normalized(w);
      error = lip * error + kQuadRounding;
    }
  }
  return orbit;
}

// Log of the set distance per step, with straddle flags for numeric steps.
void set_log_distances(const OrbitTable& table, int n, double eps, std::vector<double>& logs,
                       std::vector<bool>& straddles) {
  logs.assign(n + 1, 0.0);
  straddles.assign(n + 1, false);
  for (const auto& o : table.orbits) {
    for (const auto& s : o.steps) {
      if (s.kind == StepKind::Indeterminate) continue;
      const double l = (o.hit && *o.hit == s.n) ? kNegInf : std::log(s.distance);
      logs[s.n] = std::min(logs[s.n], l);
      if (s.error_radius > 0 && std::abs(s.distance - eps) <= s.error_radius) straddles[s.n] = true;
    }
    if (o.hit) {
      for (int k = *o.hit; k <= n; ++k) logs[k] = kNegInf;
    }
  }
}

bool coincide(const OrbitStep& a, const OrbitStep& b, double eps) {
  if (a.exact && b.exact) return *a.exact == *b.exact;
  return proj_distance(a.point, b.point) <= eps;
}

}  // namespace

OrbitTable exceptional_orbits(const RationalSurfaceMap& f, int n, const StabilityOptions& options) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "orbit length must be nonnegative");
  const auto& sources = f.inverse_indeterminacy();
  const Target target = make_target(f.indeterminacy());
  const QuadMap qmap(f.forward());
  OrbitTable table;
  table.orbits.resize(sources.size());
  parallel_for(sources.size(), [&](std::size_t i) {
    table.orbits[i] = trace_orbit(f, sources[i], target, n, options, qmap);
  });
  return table;
}

std::string Condition1Verdict::to_string() const {
  return holds ? fmt::format("HoldsThrough({})", checked_through) : fmt::format("FailsAt({})", fails_at);
}

Condition1Verdict check_condition1(const RationalSurfaceMap& f, int n, const StabilityOptions& options) {
  const OrbitTable fwd = exceptional_orbits(f, n, options);
  const OrbitTable bwd = exceptional_orbits(f.inverted(), n, options);
  Condition1Verdict v;
  v.checked_through = n;
  for (const auto& a : fwd.orbits) {
    for (const auto& sa : a.steps) {
      if (sa.kind == StepKind::Indeterminate) continue;
      for (const auto& b : bwd.orbits) {
        for (const auto& sb : b.steps) {
          if (sb.kind == StepKind::Indeterminate) continue;
          if (v.holds || sa.n + sb.n < v.fails_at) {
            if (coincide(sa, sb, options.eps)) {
              v.holds = false;
              v.fails_at = sa.n + sb.n;
              v.witness = sa.point;
            }
          }
        }
      }
    }
  }
  return v;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return "Converged";
    case Verdict::Diverging:
      return "Diverging";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Condition3Report summarize_condition3(const std::vector<double>& logs, double rho, const std::vector<bool>& straddles) {
  if (!(rho > 1)) throw Error(ErrorCode::InvalidArgument, "summability test needs rho > 1");
  if (logs.empty()) throw Error(ErrorCode::InvalidArgument, "no distances to summarize");
  Condition3Report r;
  r.rho = rho;
  const int n = static_cast<int>(logs.size()) - 1;
  r.tail_bound = std::pow(rho, -n) / (1 - 1 / rho) * std::abs(std::log(std::numeric_limits<double>::epsilon()));
  std::vector<double> terms;
  double s = 0.0;
  for (int k = 0; k <= n; ++k) {
    if (logs[k] == kNegInf && !r.hit_step) r.hit_step = k;
    const double t = r.hit_step ? kNegInf : std::pow(rho, -k) * logs[k];
    terms.push_back(t);
    s += t;
    r.partial_sums.push_back(s);
  }
  if (r.hit_step) {
    r.verdict = Verdict::Diverging;
    return r;
  }
  const bool straddle = std::any_of(straddles.begin(), straddles.end(), [](bool b) { return b; });
  if (n >= 5 && std::abs(r.partial_sums[n] - r.partial_sums[n - 5]) < 1e-6) {
    r.verdict = straddle ? Verdict::Inconclusive : Verdict::Converged;
    return r;
  }
  if (n >= 9) {
    double last = 0, prev = 0;
    for (int k = n - 4; k <= n; ++k) last += std::abs(terms[k]);
    for (int k = n - 9; k <= n - 5; ++k) prev += std::abs(terms[k]);
    if (last >= 0.5 * prev) {
      r.verdict = Verdict::Diverging;
      return r;
    }
  }
  r.verdict = Verdict::Inconclusive;
  return r;
}

Condition3Report condition3_sum(const RationalSurfaceMap& f, double rho, int n, const StabilityOptions& options) {
  if (!(rho > 1)) throw Error(ErrorCode::InvalidArgument, "summability test needs rho > 1");
  const OrbitTable table = exceptional_orbits(f, n, options);
  std::vector<double> logs;
  std::vector<bool> straddles;
  set_log_distances(table, n, options.eps, logs, straddles);
  Condition3Report r = summarize_condition3(logs, rho, straddles);
  for (const auto& o : table.orbits) {
    if (o.numeric_from) r.numeric_from = r.numeric_from ? std::min(*r.numeric_from, *o.numeric_from) : *o.numeric_from;
  }
  return r;
}

Condition3Report condition3_inverse_sum(const RationalSurfaceMap& f, double rho, int n, const StabilityOptions& options) {
  return condition3_sum(f.inverted(), rho, n, options);
}

bool sums_disagree(const Condition3Report& c3, const Condition3Report& inverse) {
  return (c3.verdict == Verdict::Converged && inverse.verdict == Verdict::Diverging) ||
         (c3.verdict == Verdict::Diverging && inverse.verdict == Verdict::Converged);
}

double separation_diagnostic(const RationalSurfaceMap& f, int n, const StabilityOptions& options) {
  const OrbitTable fwd = exceptional_orbits(f, n, options);
  const OrbitTable bwd = exceptional_orbits(f.inverted(), n, options);
  double d = std::numeric_limits<double>::infinity();
  for (const auto& a : fwd.orbits) {
    for (const auto& sa : a.steps) {
      if (sa.kind == StepKind::Indeterminate) continue;
      for (const auto& b : bwd.orbits) {
        for (const auto& sb : b.steps) {
          if (sb.kind == StepKind::Indeterminate) continue;
          d = std::min(d, coincide(sa, sb, 0.0) ? 0.0 : proj_distance(sa.point, sb.point));
        }
      }
    }
  }
  return d;
}

}  // namespace bimero
