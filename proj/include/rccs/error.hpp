#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rccs {

enum class ErrorCode {
  ForeignEvent,
  ZeroMeasureCondition,
  NotAPartition,
  SizeTooSmall,
  NotAdmissible,
  DegenerateTail,
  SingularSolve,
  NotCorrelated,
  StrictCorrelationUnsupported,
  NoFeasibleParameters,
  NotRealizable,
  ZeroQuadrantMismatch,
  BudgetExceeded,
  InvalidArgument,
  ParseError,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ForeignEvent: return "ForeignEvent";
    case ErrorCode::ZeroMeasureCondition: return "ZeroMeasureCondition";
    case ErrorCode::NotAPartition: return "NotAPartition";
    case ErrorCode::SizeTooSmall: return "SizeTooSmall";
    case ErrorCode::NotAdmissible: return "NotAdmissible";
    case ErrorCode::DegenerateTail: return "DegenerateTail";
    case ErrorCode::SingularSolve: return "SingularSolve";
    case ErrorCode::NotCorrelated: return "NotCorrelated";
    case ErrorCode::StrictCorrelationUnsupported: return "StrictCorrelationUnsupported";
    case ErrorCode::NoFeasibleParameters: return "NoFeasibleParameters";
    case ErrorCode::NotRealizable: return "NotRealizable";
    case ErrorCode::ZeroQuadrantMismatch: return "ZeroQuadrantMismatch";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure raised by the library. `code()` identifies the contract
/// that was violated; `what()` carries a human-readable explanation.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Which partition condition failed.
enum class PartitionDefect { Overlap, Gap, Empty };

constexpr std::string_view to_string(PartitionDefect d) {
  switch (d) {
    case PartitionDefect::Overlap: return "overlap";
    case PartitionDefect::Gap: return "gap";
    case PartitionDefect::Empty: return "empty";
  }
  return "unknown";
}

class NotAPartitionError : public Error {
 public:
  NotAPartitionError(PartitionDefect defect, const std::string& message)
      : Error(ErrorCode::NotAPartition, std::string(to_string(defect)) + ": " + message),
        defect_(defect) {}

  PartitionDefect defect() const noexcept { return defect_; }

 private:
  PartitionDefect defect_;
};

}  // namespace rccs
