#include <CLI11.hpp>

#include <iostream>

#include "bimero/error.hpp"
#include "commands.hpp"

using namespace bimero;
using namespace bimero::cli;

namespace {

struct Flags {
  std::string map;
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> iters;
  std::optional<int> grid;
  std::optional<int> max_period;
  std::optional<double> tolerance;
  std::optional<double> rho;
};

void add_common(CLI::App* cmd, Flags& f, bool needs_map) {
  auto* m = cmd->add_option("--map", f.map, "map file (JSON)");
  if (needs_map) m->required()->check(CLI::ExistingFile);
  cmd->add_option("--config", f.config, "experiment config (JSON)")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "random seed");
  cmd->add_option("--out", f.out, "output directory");
  cmd->add_option("--iters", f.iters, "iteration count")->check(CLI::NonNegativeNumber);
  cmd->add_option("--grid", f.grid, "grid resolution")->check(CLI::PositiveNumber);
  cmd->add_option("--max-period", f.max_period, "largest period in saddle clouds")->check(CLI::PositiveNumber);
  cmd->add_option("--tolerance-indeterminacy", f.tolerance, "numeric indeterminacy tolerance");
  cmd->add_option("--rho", f.rho, "override the dynamical degree")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const Flags& f, const std::string& command) {
  ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
  if (f.seed) c.seed = *f.seed;
  if (f.out) c.out = *f.out;
  if (f.iters) {
    if (command == "stability") c.n_orbit = *f.iters;
    if (command == "green") c.n_series = *f.iters;
    if (command == "lyapunov") c.lyapunov_steps = *f.iters;
  }
  if (f.grid) c.grid = *f.grid;
  if (f.max_period) c.max_period = *f.max_period;
  if (f.tolerance) c.tolerance_indeterminacy = *f.tolerance;
  if (f.rho) c.rho = *f.rho;
  return c;
}

std::array<double, 4> parse_center(const std::string& text) {
  std::array<double, 4> c{};
  std::stringstream in(text);
  std::string part;
  int k = 0;
  while (std::getline(in, part, ',')) {
    if (k == 4) break;
    try {
      c[k++] = std::stod(part);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "--center expects four comma-separated numbers");
    }
  }
  if (k != 4) throw Error(ErrorCode::InvalidArgument, "--center expects four comma-separated numbers");
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Birational surface dynamics on the projective plane"};
  app.set_version_flag("--version", std::string(BIMERO_VERSION));
  app.require_subcommand(1);
  Flags flags;
  std::string center = "0,0,0,0";
  int chart = 2;
  double half_width = 2.0;

  auto* inspect = app.add_subcommand("inspect", "degrees, indeterminacy and critical sets, inverse check");
  auto* stability = app.add_subcommand("stability", "orbit conditions, summability verdicts, separation");
  auto* green = app.add_subcommand("green", "Green potentials on a chart slice (PGM, CSV, residual table)");
  auto* measure = app.add_subcommand("measure", "saddle cloud, observable table, mixing correlations");
  auto* lyapunov = app.add_subcommand("lyapunov", "cocycle exponents, integrability, hyperbolicity verdict");
  auto* selftest = app.add_subcommand("energy-selftest", "energy kernel self-test");
  for (auto* c : {inspect, stability, green, measure, lyapunov}) add_common(c, flags, true);
  add_common(selftest, flags, false);
  green->add_option("--chart", chart, "affine chart index")->check(CLI::Range(0, 2));
  green->add_option("--center", center, "slice center re1,im1,re2,im2");
  green->add_option("--half-width", half_width, "slice half width")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidation;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const ExperimentConfig config = resolve(flags, name);
    CommandResult result;
    if (name == "energy-selftest") {
      result = cmd_energy_selftest(config);
    } else {
      const MapFile file = load_map_file(flags.map);
      if (name == "inspect") result = cmd_inspect(file, config);
      if (name == "stability") result = cmd_stability(file, config);
      if (name == "green") {
        SliceOptions slice;
        slice.chart = chart;
        slice.center = parse_center(center);
        slice.half_width = half_width;
        result = cmd_green(file, config, slice);
      }
      if (name == "measure") result = cmd_measure(file, config);
      if (name == "lyapunov") result = cmd_lyapunov(file, config);
    }
    result.report["exit_code"] = static_cast<int>(result.code);
    const std::string text = result.report.dump(2) + "\n";
    write_artifact(config, name + ".json", text);
    std::cout << text;
    return result.code;
  } catch (const Error& e) {
    Json err{{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
    if (const auto* p = dynamic_cast<const ParseError*>(&e)) {
      err["line"] = p->line();
      err["column"] = p->column();
    }
    std::cerr << err.dump() << "\n";
    return exit_code_for(e.code());
  }
}
