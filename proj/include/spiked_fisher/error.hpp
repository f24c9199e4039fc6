#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spiked_fisher {

enum class ErrorCode {
  InvalidDimension,
  InvalidArgument,
  DegenerateTruncation,
  InvalidSpec,
  Decomposition,
  SingularMatrix,
  IllConditioned,
  GroupingConflict,
  Domain,
  Pole,
  StepAdaptation,
  ClassificationFailure,
  Unsupported,
  DegenerateEstimate,
  DivisionByZero,
  NoBulk,
  InvalidVariance,
  DesignRank,
  Range,
  DegenerateGeometry,
  SampleSize,
  Config,
  RunAborted,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidDimension: return "invalid-dimension";
    case ErrorCode::InvalidArgument: return "invalid-argument";
    case ErrorCode::DegenerateTruncation: return "degenerate-truncation";
    case ErrorCode::InvalidSpec: return "invalid-spec";
    case ErrorCode::Decomposition: return "decomposition";
    case ErrorCode::SingularMatrix: return "singular-matrix";
    case ErrorCode::IllConditioned: return "ill-conditioned";
    case ErrorCode::GroupingConflict: return "grouping-conflict";
    case ErrorCode::Domain: return "domain";
    case ErrorCode::Pole: return "pole";
    case ErrorCode::StepAdaptation: return "step-adaptation";
    case ErrorCode::ClassificationFailure: return "classification-failure";
    case ErrorCode::Unsupported: return "unsupported";
    case ErrorCode::DegenerateEstimate: return "degenerate-estimate";
    case ErrorCode::DivisionByZero: return "division-by-zero";
    case ErrorCode::NoBulk: return "no-bulk";
    case ErrorCode::InvalidVariance: return "invalid-variance";
    case ErrorCode::DesignRank: return "design-rank";
    case ErrorCode::Range: return "range";
    case ErrorCode::DegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::SampleSize: return "sample-size";
    case ErrorCode::Config: return "config";
    case ErrorCode::RunAborted: return "run-aborted";
    case ErrorCode::Io: return "io";
  }
  return "unknown";
}

/// Every failure raised by the library carries a machine-readable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace spiked_fisher
