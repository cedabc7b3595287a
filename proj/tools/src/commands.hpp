#pragma once

#include <array>
#include <optional>

#include "report.hpp"

namespace bimero::cli {

struct SliceOptions {
  int chart = 2;
  std::array<double, 4> center{0, 0, 0, 0};
  double half_width = 2.0;
};

CommandResult cmd_inspect(const MapFile& file, const ExperimentConfig& config);
CommandResult cmd_stability(const MapFile& file, const ExperimentConfig& config);
CommandResult cmd_green(const MapFile& file, const ExperimentConfig& config, const SliceOptions& slice);
CommandResult cmd_measure(const MapFile& file, const ExperimentConfig& config);
CommandResult cmd_lyapunov(const MapFile& file, const ExperimentConfig& config);
CommandResult cmd_energy_selftest(const ExperimentConfig& config);

}  // namespace bimero::cli
