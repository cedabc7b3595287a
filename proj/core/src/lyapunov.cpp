#include "bimero/lyapunov.hpp"

#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "bimero/error.hpp"
#include "bimero/parallel.hpp"

namespace bimero {

namespace {

using Frame = Eigen::Matrix<Complex, 3, 2>;

struct OrbitResult {
  bool excluded = false;
  double plus = 0;
  double minus = 0;
  double det_residual = 0;
};

// Modified Gram-Schmidt on two columns, returning log|R_11|, log|R_22|.
std::pair<double, double> orthonormalize(Frame& v) {
  const double r11 = v.col(0).norm();
  v.col(0) /= r11;
  v.col(1) -= v.col(0) * v.col(0).dot(v.col(1));
  const double r22 = v.col(1).norm();
  v.col(1) /= r22;
  return {std::log(r11), std::log(r22)};
}

double weighted_se(const std::vector<double>& x, const std::vector<double>& w, double mean) {
  double var = 0, w2 = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    var += w[i] * (x[i] - mean) * (x[i] - mean);
    w2 += w[i] * w[i];
  }
  return std::sqrt(var * w2);
}

}  // namespace

LyapunovEstimate cocycle_exponents(const RationalSurfaceMap& f, const WeightedPointCloud& cloud,
                                   const LyapunovOptions& options) {
  if (options.steps < 1) throw Error(ErrorCode::InvalidArgument, "steps must be positive");
  if (cloud.size() == 0) throw Error(ErrorCode::AllOrbitsExcluded, "empty cloud");
  const NumericMap& F = f.numeric();
  const auto& ind = f.indeterminacy();
  const double log_degree = std::log(static_cast<double>(F.degree()));
  const std::size_t m = cloud.size();

  std::vector<int> successor(m, -1);
  parallel_for(
      m,
      [&](std::size_t i) {
        if (distance_to_set(cloud.points[i].point, ind) <= options.exclusion_radius) return;
        const Vec3 w = F.evaluate(cloud.points[i].point.unit());
        if (!(w.norm() > 0)) return;
        const ProjectivePoint image(w);
        for (std::size_t j = 0; j < m; ++j) {
          if (proj_distance(image, cloud.points[j].point) < options.snap_tolerance) {
            successor[i] = static_cast<int>(j);
            return;
          }
        }
      },
      options.workers);

  std::vector<OrbitResult> results(m);
  parallel_for(
      m,
      [&](std::size_t i) {
        OrbitResult& out = results[i];
        Vec3 z = cloud.points[i].point.unit();
        int index = static_cast<int>(i);
        Frame q = orthonormal_complement(z);
        double s1 = 0, s2 = 0, det_sum = 0;
        for (int k = 0; k < options.steps; ++k) {
          if (distance_to_set(ProjectivePoint(z), ind) <= options.exclusion_radius) {
            out.excluded = true;
            return;
          }
          const Vec3 w = F.evaluate(z);
          const double nw = w.norm();
          if (!(nw > 0) || !std::isfinite(nw)) {
            out.excluded = true;
            return;
          }
          const Mat3 jac = F.jacobian(z);
          Vec3 next;
          if (index >= 0 && successor[index] >= 0) {
            index = successor[index];
            next = cloud.points[index].point.unit();
          } else {
            index = -1;
            next = w / nw;
          }
          Frame v = jac * q / nw;
          // project onto next-perp
          v -= next * (next.adjoint() * v);
          const auto [l1, l2] = orthonormalize(v);
          s1 += l1;
          s2 += l2;
          det_sum += std::log(std::abs(jac.determinant())) - log_degree - 3 * std::log(nw);
          q = v;
          z = next;
        }
        out.plus = s1 / options.steps;
        out.minus = s2 / options.steps;
        if (out.minus > out.plus) std::swap(out.plus, out.minus);
        out.det_residual = std::abs(s1 + s2 - det_sum);
      },
      options.workers);

  LyapunovEstimate est;
  est.n_steps = options.steps;
  est.provenance = cloud.provenance;
  est.point_plus.assign(m, std::numeric_limits<double>::quiet_NaN());
  est.point_minus.assign(m, std::numeric_limits<double>::quiet_NaN());
  std::vector<double> plus, minus, sum, w;
  double kept = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (results[i].excluded) {
      ++est.excluded;
      est.excluded_mass += cloud.weight(i);
      continue;
    }
    est.point_plus[i] = results[i].plus;
    est.point_minus[i] = results[i].minus;
    plus.push_back(results[i].plus);
    minus.push_back(results[i].minus);
    sum.push_back(results[i].plus + results[i].minus);
    w.push_back(cloud.weight(i));
    kept += cloud.weight(i);
    est.determinant_residual = std::max(est.determinant_residual, results[i].det_residual);
  }
  if (plus.empty()) throw Error(ErrorCode::AllOrbitsExcluded, "every orbit passes too close to I(f)");
  for (double& x : w) x /= kept;
  double sum_mean = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    est.chi_plus += w[i] * plus[i];
    est.chi_minus += w[i] * minus[i];
  }
  sum_mean = est.chi_plus + est.chi_minus;
  est.se_plus = weighted_se(plus, w, est.chi_plus);
  est.se_minus = weighted_se(minus, w, est.chi_minus);
  est.se_sum = weighted_se(sum, w, sum_mean);
  return est;
}

IntegrabilityReport integrability_partial(const RationalSurfaceMap& f, const WeightedPointCloud& cloud,
                                          double exclusion_radius, double tolerance) {
  if (cloud.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty cloud");
  const auto& ind = f.indeterminacy();
  std::vector<double> values(cloud.size());
  IntegrabilityReport report;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double d = distance_to_set(cloud.points[i].point, ind);
    if (d <= exclusion_radius) report.near_indeterminacy_mass += cloud.weight(i);
    const Vec3 z = cloud.points[i].point.unit();
    const Vec3 w = f.numeric().evaluate(z);
    if (!(w.norm() > 0)) {
      values[i] = std::numeric_limits<double>::infinity();
      continue;
    }
    Eigen::JacobiSVD<Mat2> svd(tangent_map(f.numeric(), z));
    values[i] = std::abs(std::log(svd.singularValues()(0)));
  }
  for (int k = 1; k <= 12; ++k) {
    const double level = std::ldexp(1.0, k);
    double mean = 0;
    for (std::size_t i = 0; i < values.size(); ++i) mean += cloud.weight(i) * std::min(values[i], level);
    report.levels.push_back(level);
    report.means.push_back(mean);
  }
  report.last_difference = std::abs(report.means[11] - report.means[10]);
  report.cauchy = report.last_difference < tolerance;
  report.verdict = report.cauchy && report.near_indeterminacy_mass == 0 ? IntegrabilityVerdict::IntegrableConsistent
                                                                        : IntegrabilityVerdict::Inconclusive;
  return report;
}

HyperbolicityReport hyperbolicity_verdict(const LyapunovEstimate& est, double rho) {
  if (!(rho > 0)) throw Error(ErrorCode::InvalidArgument, "rho must be positive");
  HyperbolicityReport r;
  r.bound = std::log(rho) / 8;
  r.margin_plus = est.chi_plus - r.bound;
  r.margin_minus = -r.bound - est.chi_minus;
  r.expanding = est.chi_plus >= r.bound - 2 * est.se_plus;
  r.contracting = est.chi_minus <= -r.bound + 2 * est.se_minus;
  return r;
}

std::string_view to_string(IntegrabilityVerdict v) noexcept {
  return v == IntegrabilityVerdict::IntegrableConsistent ? "IntegrableConsistent" : "Inconclusive";
}

}  // namespace bimero
