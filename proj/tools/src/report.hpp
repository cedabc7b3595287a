#pragma once

#include <string>
#include <vector>

#include "bimero/error.hpp"
#include "bimero/mapfile.hpp"
#include "config.hpp"
#include "json.hpp"

namespace bimero::cli {

using Json = nlohmann::ordered_json;

enum ExitCode { kSuccess = 0, kValidation = 2, kPrecondition = 3, kInconclusive = 4 };

ExitCode exit_code_for(ErrorCode code);

/// Finite doubles as numbers, others as the strings "inf", "-inf", "nan".
Json number(double v);
Json numbers(const std::vector<double>& v);
Json point(const ProjectivePoint& p);
std::string csv_number(double v);

/// Header shared by every report: tool, version, command, seed, tolerances, map.
Json report_header(const std::string& command, const ExperimentConfig& config, const MapFile* map);

/// Writes text to out/name, creating the directory.
void write_artifact(const ExperimentConfig& config, const std::string& name, const std::string& text);

struct CommandResult {
  Json report;
  ExitCode code = kSuccess;
};

}  // namespace bimero::cli
