#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "bimero/corpus.hpp"
#include "bimero/energy.hpp"
#include "commands.hpp"

namespace bimero::cli {

using namespace bimero::functions;

namespace {

constexpr double kPi = std::numbers::pi;

GridChart unit_box(int resolution) {
  return {ProjectivePoint(Complex(0.5, 0.5), Complex(0.5, 0.5), 1), 2, 0.5, resolution};
}

Mat2 tilted_form() {
  Mat2 t;
  t << 1.0, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.5;
  return t;
}

std::vector<TrigMode> random_modes(std::mt19937_64& rng, int n, double scale) {
  std::uniform_int_distribution<int> k(-2, 2);
  std::normal_distribution<double> g;
  std::vector<TrigMode> out;
  for (int i = 0; i < n; ++i) {
    TrigMode m;
    for (auto& e : m.k) e = k(rng);
    m.a = scale * g(rng);
    m.b = scale * g(rng);
    out.push_back(m);
  }
  return out;
}

struct Check {
  std::string name;
  double value;
  std::string requirement;
  bool pass;
};

}  // namespace

CommandResult cmd_energy_selftest(const ExperimentConfig& config) {
  std::vector<Check> checks;
  auto run = [&](const std::string& name, const std::string& requirement, const std::function<Check()>& fn) {
    try {
      checks.push_back(fn());
    } catch (const Error& e) {
      checks.push_back({name, NAN, requirement + " (" + e.what() + ")", false});
    }
  };

  run("constant", "E = 0", [] {
    const double e = energy(constant(3.0), euclidean_form(), unit_box(8));
    return Check{"constant", e, "E = 0", e == 0.0};
  });
  run("real_coordinate", "|E - 1/(2 pi)| < 1e-12", [] {
    const double e = energy(real_coordinate(1), euclidean_form(), unit_box(8));
    return Check{"real_coordinate", e, "|E - 1/(2 pi)| < 1e-12", std::abs(e - 1 / (2 * kPi)) < 1e-12};
  });
  run("bump", "within 1% of 8 pi R^2 / 63", [] {
    const double exact = 8 * kPi * 0.25 / 63;
    const double e = energy(bump(Vec2::Zero(), 0.5), euclidean_form(), {ProjectivePoint(0, 0, 1), 2, 0.5, 24});
    return Check{"bump", e, "within 1% of 8 pi R^2 / 63", std::abs(e - exact) < 0.01 * exact};
  });
  run("polarization", "max relative defect < 1e-10", [&] {
    std::mt19937_64 rng(config.seed);
    const auto t = constant_form(tilted_form());
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
      const auto phi = trig_polynomial(random_modes(rng, 3, 1.0));
      const auto psi = trig_polynomial(random_modes(rng, 3, 1.0));
      const double lhs = energy(sum(phi, psi), t, unit_box(8));
      const double rhs =
          energy(phi, t, unit_box(8)) + 2 * energy(phi, psi, t, unit_box(8)) + energy(psi, t, unit_box(8));
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
    return Check{"polarization", worst, "max relative defect < 1e-10", worst < 1e-10};
  });
  run("comparison", "min residual >= -1e-8 over 200 instances", [&] {
    std::mt19937_64 rng(config.seed + 31);
    const auto t = constant_form(tilted_form());
    double worst = INFINITY;
    for (int i = 0; i < 200; ++i) {
      const auto u = trig_polynomial(random_modes(rng, 4, 0.3));
      const auto wm = random_modes(rng, 3, 0.1);
      double amplitude = 0;
      for (const auto& m : wm) amplitude += std::hypot(m.a, m.b);
      const auto v = sum(u, trig_polynomial(wm, amplitude + 0.01));
      const double c = std::max(fit_psh_constant(u, unit_box(8)), fit_psh_constant(v, unit_box(8)));
      const auto r = energy_comparison(u, v, c, t, unit_box(8));
      worst = std::min({worst, r.lower, r.upper});
    }
    return Check{"comparison", worst, "min residual >= -1e-8 over 200 instances", worst >= -1e-8};
  });
  const Vec2 pole(Complex(0.013, 0.007), Complex(-0.011, 0.004));
  const std::vector<double> levels{1, 2, 3, 4, 5, 6, 7, 8};
  run("cauchy_log_pole", "Cauchy against the Euclidean form", [&] {
    const auto r = cauchy_diagnostic({log_distance(pole), {pole}}, euclidean_form(),
                                     {ProjectivePoint(0, 0, 1), 2, 1.2, 16}, levels);
    return Check{"cauchy_log_pole", r.tail_ratio, "Cauchy against the Euclidean form", r.cauchy};
  });
  run("cauchy_negative_control", "not Cauchy against a form with a log pole", [&] {
    const auto r = cauchy_diagnostic({log_distance(pole), {pole}}, ddc_log_form(pole, 1e-6),
                                     {ProjectivePoint(0, 0, 1), 2, 1.2, 16}, levels);
    return Check{"cauchy_negative_control", r.tail_ratio, "not Cauchy against a form with a log pole", !r.cauchy};
  });
  run("pushforward_unitary", "relative discrepancy < 1e-3", [] {
    const Vec2 s(Complex(0.1, 0.2), Complex(-0.1, 0.05));
    const GridChart source{ProjectivePoint(Complex(-0.05, -0.1), Complex(-0.2, 0.1), 1), 2, 0.6, 24};
    const GridChart target{ProjectivePoint(s(0), 1, s(1)), 1, 0.6, 24};
    const auto r = pushforward_energy_check(bump(s, 0.5), corpus::unitary(), euclidean_form(), source, target);
    return Check{"pushforward_unitary", r.relative, "relative discrepancy < 1e-3", r.relative < 1e-3};
  });

  Json r = report_header("energy-selftest", config, nullptr);
  Json rows = Json::array();
  bool all = true;
  for (const auto& c : checks) {
    rows.push_back({{"name", c.name}, {"value", number(c.value)}, {"requirement", c.requirement}, {"pass", c.pass}});
    all = all && c.pass;
  }
  r["checks"] = rows;
  r["passed"] = all;
  return {r, all ? kSuccess : kInconclusive};
}

}  // namespace bimero::cli
