#include "report.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>

namespace bimero::cli {

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::NoExpansion:
    case ErrorCode::SimpleEigenvalueViolated:
    case ErrorCode::DegenerateNormalization:
    case ErrorCode::PremiseViolated:
    case ErrorCode::ChartMeetsExceptionalSet:
    case ErrorCode::NonPositiveT:
      return kPrecondition;
    case ErrorCode::NumericUnderflow:
    case ErrorCode::CoefficientOverflow:
    case ErrorCode::TooCloseToIndeterminacy:
    case ErrorCode::OrbitHitIndeterminacy:
    case ErrorCode::InsufficientSamples:
    case ErrorCode::NoSaddlesFound:
    case ErrorCode::AllOrbitsExcluded:
    case ErrorCode::PositiveDimensionalLocus:
      return kInconclusive;
    default:
      return kValidation;
  }
}

Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json point(const ProjectivePoint& p) {
  Json a = Json::array();
  for (int i = 0; i < 3; ++i) a.push_back({number(p.unit()(i).real()), number(p.unit()(i).imag())});
  return a;
}

std::string csv_number(double v) { return fmt::format("{:.17g}", v); }

Json report_header(const std::string& command, const ExperimentConfig& config, const MapFile* map) {
  Json h;
  h["tool"] = "bimero";
  h["version"] = BIMERO_VERSION;
  h["command"] = command;
  h["seed"] = config.seed;
  h["config"] = config.to_json();
  h["map"] = map ? Json::parse(serialize_map_file(*map)) : Json(nullptr);
  return h;
}

void write_artifact(const ExperimentConfig& config, const std::string& name, const std::string& text) {
  std::filesystem::create_directories(config.out);
  std::ofstream out(config.out / name, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + (config.out / name).string());
  out << text;
}

}  // namespace bimero::cli
