#include "commands.hpp"

#include <fmt/format.h>

#include <cmath>

#include "bimero/cohomology.hpp"
#include "bimero/lyapunov.hpp"
#include "bimero/measure.hpp"
#include "bimero/potential.hpp"
#include "bimero/stability.hpp"

namespace bimero::cli {

namespace {

struct ResolvedRho {
  double rho = 1;
  std::string source;
};

std::optional<CohomologyLattice> lattice_for(const MapFile& file, const RationalSurfaceMap& f) {
  if (file.lattice) return file.lattice;
  return p2_lattice(f);
}

// Dynamical degree from the lattice, the config override, or deg f for maps without one.
ResolvedRho resolve_rho(const MapFile& file, const RationalSurfaceMap& f, const ExperimentConfig& config) {
  if (config.rho) return {*config.rho, "config"};
  if (auto lattice = lattice_for(file, f)) return {spectral_data(*lattice).rho, "lattice"};
  return {static_cast<double>(f.degree()), "degree"};
}

Json indeterminacy_json(const std::vector<IndeterminacyPoint>& set) {
  Json a = Json::array();
  for (const auto& q : set) {
    Json e;
    e["point"] = point(q.point);
    e["exact"] = q.exact ? Json(q.exact->to_string()) : Json(nullptr);
    e["residual"] = number(q.residual);
    a.push_back(e);
  }
  return a;
}

Json condition3_json(const Condition3Report& r) {
  Json j;
  j["verdict"] = to_string(r.verdict);
  j["partial_sums"] = numbers(r.partial_sums);
  j["tail_bound"] = number(r.tail_bound);
  j["hit_step"] = r.hit_step ? Json(*r.hit_step) : Json(nullptr);
  j["numeric_from"] = r.numeric_from ? Json(*r.numeric_from) : Json(nullptr);
  j["rho"] = number(r.rho);
  return j;
}

SaddleSearchOptions search_options(const ExperimentConfig& config) {
  SaddleSearchOptions o;
  o.seed = config.seed;
  return o;
}

}  // namespace

CommandResult cmd_inspect(const MapFile& file, const ExperimentConfig& config) {
  const auto f = file.to_map();
  Json r = report_header("inspect", config, &file);
  r["degree"] = f.degree();
  const auto seq = degree_sequence(f, 5);
  r["degree_sequence"] = seq.degrees;
  r["multiplicative"] = seq.stable;
  r["indeterminacy"] = indeterminacy_json(f.indeterminacy());
  Json crit = Json::array();
  for (const auto& c : critical_set(f)) crit.push_back({{"factor", c.factor.to_string()}, {"multiplicity", c.multiplicity}});
  r["critical_set"] = crit;
  if (f.has_inverse()) {
    r["inverse_verified"] = verify_inverse(f);
    r["inverse_indeterminacy"] = indeterminacy_json(f.inverse_indeterminacy());
  } else {
    r["inverse_verified"] = nullptr;
  }
  const bool ok = !f.has_inverse() || r["inverse_verified"].get<bool>();
  return {r, ok ? kSuccess : kValidation};
}

CommandResult cmd_stability(const MapFile& file, const ExperimentConfig& config) {
  const auto f = file.to_map();
  StabilityOptions opts;
  opts.eps = config.tolerance_indeterminacy;
  const int n = config.n_orbit;
  Json r = report_header("stability", config, &file);

  const auto lattice = lattice_for(file, f);
  ResolvedRho rho{static_cast<double>(f.degree()), "degree"};
  if (lattice) {
    const auto spectral = spectral_data(*lattice);
    Json s;
    s["rho"] = spectral.rho;
    s["rho_inverse"] = spectral.rho_inverse;
    s["theta_plus"] = std::vector<double>(spectral.theta_plus.data(), spectral.theta_plus.data() + spectral.theta_plus.size());
    s["theta_plus_in_cone"] = cone_K_test(*lattice, spectral.theta_plus);
    const auto res = normalization_residuals(*lattice, spectral);
    s["normalization_residuals"] = numbers({res[0], res[1], res[2]});
    s["adjoint"] = check_adjoint(*lattice);
    r["spectral"] = s;
    rho = {spectral.rho, "lattice"};
  } else {
    r["spectral"] = nullptr;
  }
  if (config.rho) rho = {*config.rho, "config"};
  r["rho"] = rho.rho;
  r["rho_source"] = rho.source;

  const auto c1 = check_condition1(f, n, opts);
  r["condition1"] = {{"verdict", c1.to_string()},
                     {"holds", c1.holds},
                     {"fails_at", c1.holds ? Json(nullptr) : Json(c1.fails_at)},
                     {"witness", c1.witness ? point(*c1.witness) : Json(nullptr)}};
  const auto c3 = condition3_sum(f, rho.rho, n, opts);
  r["condition3"] = condition3_json(c3);
  if (f.has_inverse()) {
    const auto mu = condition3_inverse_sum(f, rho.rho, n, opts);
    r["condition3_inverse"] = condition3_json(mu);
    r["verdicts_agree"] = !sums_disagree(c3, mu);
  }
  r["separation"] = number(separation_diagnostic(f, n, opts));

  PotentialEvaluator ev(f, rho.rho, Direction::Forward, config.tolerance_indeterminacy);
  bool finite = true;
  for (const auto& q : f.inverse_indeterminacy()) {
    try {
      finite = finite && std::isfinite(ev.green_partial(q.point, n));
    } catch (const OrbitHitIndeterminacy&) {
      finite = false;
    }
  }
  r["green_finite_on_inverse_indeterminacy"] = finite;
  r["green_finiteness_matches_verdict"] = finite == (c3.verdict == Verdict::Converged);
  return {r, c3.verdict == Verdict::Inconclusive ? kInconclusive : kSuccess};
}

CommandResult cmd_green(const MapFile& file, const ExperimentConfig& config, const SliceOptions& opts) {
  const auto f = file.to_map();
  const auto rho = resolve_rho(file, f, config);
  const int n = config.n_series;
  ChartSlice slice;
  slice.chart = opts.chart;
  slice.u1 = Complex(opts.center[0], opts.center[1]);
  slice.u2 = Complex(opts.center[2], opts.center[3]);
  slice.half_width = opts.half_width;
  slice.resolution = config.grid;

  Json r = report_header("green", config, &file);
  r["rho"] = rho.rho;
  r["rho_source"] = rho.source;
  r["iterations"] = n;
  r["slice"] = {{"chart", slice.chart},
                {"center", {opts.center[0], opts.center[1], opts.center[2], opts.center[3]}},
                {"half_width", slice.half_width},
                {"resolution", slice.resolution}};

  auto field = [&](const PotentialEvaluator& ev) {
    return sample_slice(slice, [&](const Vec3& z) {
      try {
        return ev.green_telescoped(ProjectivePoint(z), n);
      } catch (const Error&) {
        return std::numeric_limits<double>::quiet_NaN();
      }
    });
  };
  std::filesystem::create_directories(config.out);
  auto emit = [&](const std::string& name, const std::vector<double>& values) {
    const auto scale = write_pgm((config.out / (name + ".pgm")).string(), values, slice.resolution, slice.resolution);
    Json side = report_header("green", config, nullptr);
    side["field"] = name;
    side["width"] = slice.resolution;
    side["height"] = slice.resolution;
    side["encoding"] = "P5 16-bit big-endian; value = offset + scale * sample; sample 0 marks non-finite";
    side["offset"] = number(scale.offset);
    side["scale"] = number(scale.scale);
    side["min"] = number(scale.min);
    side["max"] = number(scale.max);
    side["non_finite"] = scale.non_finite;
    side["slice"] = r["slice"];
    write_artifact(config, name + ".json", side.dump(2) + "\n");
    return Json{{"pgm", name + ".pgm"}, {"sidecar", name + ".json"}, {"min", number(scale.min)},
                {"max", number(scale.max)}, {"non_finite", scale.non_finite}};
  };

  PotentialEvaluator plus(f, rho.rho, Direction::Forward, config.tolerance_indeterminacy);
  const auto gp = field(plus);
  Json artifacts;
  artifacts["green_plus"] = emit("green_plus", gp);
  std::vector<double> gm;
  if (f.has_inverse()) {
    PotentialEvaluator minus(f, rho.rho, Direction::Backward, config.tolerance_indeterminacy);
    gm = field(minus);
    artifacts["green_minus"] = emit("green_minus", gm);
  }
  std::string csv = gm.empty() ? "i,j,u1_re,u1_im,u2_re,u2_im,g_plus\n" : "i,j,u1_re,u1_im,u2_re,u2_im,g_plus,g_minus\n";
  for (int i = 0; i < slice.resolution; ++i) {
    for (int j = 0; j < slice.resolution; ++j) {
      const Vec3 z = slice.point(i, j);
      const std::size_t k = static_cast<std::size_t>(i) * slice.resolution + j;
      int idx[2], s = 0;
      for (int c = 0; c < 3; ++c) {
        if (c != slice.chart) idx[s++] = c;
      }
      const Complex a = z(idx[0]) / z(slice.chart), b = z(idx[1]) / z(slice.chart);
      csv += fmt::format("{},{},{},{},{},{},{}", i, j, csv_number(a.real()), csv_number(a.imag()),
                         csv_number(b.real()), csv_number(b.imag()), csv_number(gp[k]));
      if (!gm.empty()) csv += "," + csv_number(gm[k]);
      csv += "\n";
    }
  }
  write_artifact(config, "green.csv", csv);
  artifacts["csv"] = "green.csv";
  r["artifacts"] = artifacts;

  Json table = Json::array();
  double worst = 0;
  bool within = true;
  const int stride = std::max(1, slice.resolution / 8);
  std::size_t skipped = 0;
  for (int i = stride / 2; i < slice.resolution; i += stride) {
    for (int j = stride / 2; j < slice.resolution; j += stride) {
      const ProjectivePoint p(slice.point(i, j));
      try {
        const auto check = plus.functional_check(p, n);
        worst = std::max(worst, check.residual);
        within = within && check.residual <= check.tail_bound;
        table.push_back({{"i", i}, {"j", j}, {"residual", number(check.residual)}, {"tail_bound", number(check.tail_bound)}});
      } catch (const Error&) {
        ++skipped;
      }
    }
  }
  r["functional_equation"] = {{"rows", table}, {"max_residual", number(worst)}, {"within_tail_bound", within},
                              {"skipped", skipped}};
  return {r, within ? kSuccess : kInconclusive};
}

CommandResult cmd_measure(const MapFile& file, const ExperimentConfig& config) {
  const auto f = file.to_map();
  const auto rho = resolve_rho(file, f, config);
  const auto opts = search_options(config);
  const auto cloud = saddle_cloud(f, config.max_period, opts);
  Json r = report_header("measure", config, &file);
  write_artifact(config, "cloud.csv", cloud_to_csv(cloud));
  long total = 0;
  for (long x : cloud.numerators) total += x;
  r["cloud"] = {{"csv", "cloud.csv"},
                {"points", cloud.size()},
                {"max_period", cloud.max_period},
                {"provenance", cloud.provenance == CloudProvenance::SaddleOrbits ? "saddle-orbits" : "intersections"},
                {"weights_sum_exactly_one", total == cloud.denominator},
                {"caveat", "uniform weights on saddle orbits; agreement between periods is the quality gate"}};

  const auto family = observables::smooth_family(20, config.seed);
  std::optional<WeightedPointCloud> lower;
  if (config.max_period > 1) {
    try {
      lower = saddle_cloud(f, config.max_period - 1, opts);
    } catch (const Error&) {
    }
  }
  Json table = Json::array();
  double worst_z = 0, worst_invariance = 0;
  for (std::size_t k = 0; k < family.size(); ++k) {
    Json row;
    row["observable"] = k;
    const double mean = measure_average(cloud, family[k]);
    const double se = measure_standard_error(cloud, family[k]);
    row["mean"] = number(mean);
    row["standard_error"] = number(se);
    const double inv = invariance_residual(f, cloud, family[k]);
    worst_invariance = std::max(worst_invariance, inv);
    row["invariance_residual"] = number(inv);
    if (lower) {
      const double m2 = measure_average(*lower, family[k]);
      const double se2 = std::hypot(se, measure_standard_error(*lower, family[k]));
      row["mean_previous_period"] = number(m2);
      const double z = se2 > 0 ? std::abs(mean - m2) / se2 : (mean == m2 ? 0.0 : INFINITY);
      row["difference_in_se"] = number(z);
      worst_z = std::max(worst_z, z);
    }
    table.push_back(row);
  }
  r["observables"] = table;
  r["max_invariance_residual"] = number(worst_invariance);
  r["max_difference_in_se"] = lower ? number(worst_z) : Json(nullptr);

  std::vector<double> mixing(11, 0.0);
  for (int n = 0; n <= 10; ++n) {
    for (int k = 0; k < 5; ++k) mixing[n] += std::abs(mixing_correlation(f, cloud, family[k], family[k + 5], n)) / 5;
  }
  r["mixing"] = {{"mean_abs_correlation", numbers(mixing)},
                 {"decreasing", mixing[10] < mixing[1] &&
                                    (mixing[8] + mixing[9] + mixing[10]) < (mixing[1] + mixing[2] + mixing[3])},
                 {"reference_rate", number(std::pow(rho.rho, -0.5))}};

  const std::vector<double> scales{0.5, 0.2, 0.1, 0.05, 0.01};
  std::vector<double> bumps, tubes;
  for (double s : scales) {
    bumps.push_back(measure_average(cloud, observables::point_bump(cloud.points[0].point, s)));
    tubes.push_back(measure_average(cloud, observables::line_tube(Vec3(1, -1, 0), s)));
  }
  r["shrinking"] = {{"scales", scales}, {"point_bump", numbers(bumps)}, {"line_tube", numbers(tubes)}};
  const auto decay = ball_mass_decay(cloud, rho.rho, 0.5, 8);
  r["ball_decay"] = {{"rho", rho.rho},
                     {"rho_source", rho.source},
                     {"radii", numbers(decay.radii)},
                     {"masses", numbers(decay.masses)},
                     {"exponent", number(decay.exponent)},
                     {"reference", number(0.4 * std::log(rho.rho))}};
  return {r, kSuccess};
}

CommandResult cmd_lyapunov(const MapFile& file, const ExperimentConfig& config) {
  const auto f = file.to_map();
  const auto rho = resolve_rho(file, f, config);
  const auto cloud = saddle_cloud(f, config.max_period, search_options(config));
  LyapunovOptions opts;
  opts.steps = config.lyapunov_steps;
  const auto est = cocycle_exponents(f, cloud, opts);
  const auto verdict = hyperbolicity_verdict(est, rho.rho);
  const auto integ = integrability_partial(f, cloud);
  Json r = report_header("lyapunov", config, &file);
  r["estimate"] = {{"chi_plus", number(est.chi_plus)},
                   {"chi_minus", number(est.chi_minus)},
                   {"n_steps", est.n_steps},
                   {"provenance", est.provenance == CloudProvenance::SaddleOrbits ? "saddle-orbits" : "intersections"},
                   {"standard_error", number(est.standard_error())},
                   {"se_plus", number(est.se_plus)},
                   {"se_minus", number(est.se_minus)},
                   {"se_sum", number(est.se_sum)},
                   {"excluded", est.excluded},
                   {"excluded_mass", number(est.excluded_mass)},
                   {"determinant_residual", number(est.determinant_residual)},
                   {"cloud_points", cloud.size()},
                   {"caveat", "saddle clouds are not known to be generic for Birkhoff averages"}};
  r["integrability"] = {{"levels", numbers(integ.levels)},
                        {"means", numbers(integ.means)},
                        {"last_difference", number(integ.last_difference)},
                        {"cauchy", integ.cauchy},
                        {"near_indeterminacy_mass", number(integ.near_indeterminacy_mass)},
                        {"verdict", to_string(integ.verdict)}};
  r["hyperbolicity"] = {{"rho", rho.rho},
                        {"rho_source", rho.source},
                        {"bound", number(verdict.bound)},
                        {"expanding", verdict.expanding},
                        {"contracting", verdict.contracting},
                        {"margin_plus", number(verdict.margin_plus)},
                        {"margin_minus", number(verdict.margin_minus)}};
  return {r, kSuccess};
}

}  // namespace bimero::cli
