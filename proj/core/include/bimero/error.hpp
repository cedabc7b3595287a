#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace bimero {

enum class ErrorCode {
  ZeroVector,
  ZeroDenominator,
  NumericUnderflow,
  CoefficientOverflow,
  PositiveDimensionalLocus,
  MissingInverse,
  TooCloseToIndeterminacy,
  NoExpansion,
  DegenerateNormalization,
  SimpleEigenvalueViolated,
  OrbitHitIndeterminacy,
  InsufficientSamples,
  NonPositiveT,
  PremiseViolated,
  ChartMeetsExceptionalSet,
  NoSaddlesFound,
  AllOrbitsExcluded,
  InvalidArgument,
  ParseError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure reported by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by exact composition once a coefficient exceeds the configured bit bound.
/// `completed` is the last iterate index that finished before the overflow.
class CoefficientOverflow : public Error {
 public:
  CoefficientOverflow(std::size_t completed, const std::string& what)
      : Error(ErrorCode::CoefficientOverflow, what), completed_(completed) {}

  std::size_t completed() const noexcept { return completed_; }

 private:
  std::size_t completed_;
};

class OrbitHitIndeterminacy : public Error {
 public:
  OrbitHitIndeterminacy(std::size_t step, const std::string& what)
      : Error(ErrorCode::OrbitHitIndeterminacy, what), step_(step) {}

  std::size_t step() const noexcept { return step_; }

 private:
  std::size_t step_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace bimero
