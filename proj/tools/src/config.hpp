#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

namespace bimero::cli {

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int n_orbit = 50;
  int n_series = 25;
  int lyapunov_steps = 200;
  int grid = 128;
  int max_period = 6;
  double tolerance_indeterminacy = 1e-9;
  std::filesystem::path out = "bimero-out";
  /// Overrides the dynamical degree taken from the lattice.
  std::optional<double> rho;

  nlohmann::ordered_json to_json() const;
};

/// Reads a JSON config; unknown keys and wrong types throw InvalidArgument.
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace bimero::cli
