#include "config.hpp"

#include <fstream>

#include "bimero/error.hpp"

namespace bimero::cli {

using nlohmann::json;

nlohmann::ordered_json ExperimentConfig::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["n_orbit"] = n_orbit;
  j["n_series"] = n_series;
  j["lyapunov_steps"] = lyapunov_steps;
  j["grid"] = grid;
  j["max_period"] = max_period;
  j["tolerance_indeterminacy"] = tolerance_indeterminacy;
  j["rho_override"] = rho ? json(*rho) : json(nullptr);
  return j;
}

namespace {

template <class T>
void read(const json& doc, const char* key, T& into) {
  if (!doc.contains(key)) return;
  try {
    into = doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::InvalidArgument, std::string("config key '") + key + "' has the wrong type");
  }
}

}  // namespace

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::InvalidArgument, "config " + path.string() + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::InvalidArgument, "config must be a JSON object");
  static const char* known[] = {"seed", "n_orbit", "n_series", "lyapunov_steps", "grid", "max_period",
                                "tolerance_indeterminacy", "out", "rho"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw Error(ErrorCode::InvalidArgument, "unknown config key '" + key + "'");
    }
  }
  ExperimentConfig c;
  read(doc, "seed", c.seed);
  read(doc, "n_orbit", c.n_orbit);
  read(doc, "n_series", c.n_series);
  read(doc, "lyapunov_steps", c.lyapunov_steps);
  read(doc, "grid", c.grid);
  read(doc, "max_period", c.max_period);
  read(doc, "tolerance_indeterminacy", c.tolerance_indeterminacy);
  std::string out;
  read(doc, "out", out);
  if (!out.empty()) c.out = out;
  if (doc.contains("rho")) {
    double r = 0;
    read(doc, "rho", r);
    c.rho = r;
  }
  return c;
}

}  // namespace bimero::cli
