#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace synclab {

enum class ErrorCode {
  MalformedDocument,
  SelfEdge,
  ConflictingEdgeClass,
  CompatibilityViolation,
  InvalidArgument,
  UnknownFixture,
  MixedCellClasses,
  TooManyCells,
  NotBalanced,
  NotSymmetric,
  RowSumNonzero,
  NoConvergence,
  NonDifferentiableExpression,
  ParseError,
  NonOddCoupling,
  MissingCoupling,
  MissingConstant,
  NotBidirected,
  StepTooLarge,
  NotEquilibrium,
  GraphNotRegular,
  Condition30Violated,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::SelfEdge: return "SelfEdge";
    case ErrorCode::ConflictingEdgeClass: return "ConflictingEdgeClass";
    case ErrorCode::CompatibilityViolation: return "CompatibilityViolation";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::UnknownFixture: return "UnknownFixture";
    case ErrorCode::MixedCellClasses: return "MixedCellClasses";
    case ErrorCode::TooManyCells: return "TooManyCells";
    case ErrorCode::NotBalanced: return "NotBalanced";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::RowSumNonzero: return "RowSumNonzero";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NonDifferentiableExpression: return "NonDifferentiableExpression";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NonOddCoupling: return "NonOddCoupling";
    case ErrorCode::MissingCoupling: return "MissingCoupling";
    case ErrorCode::MissingConstant: return "MissingConstant";
    case ErrorCode::NotBidirected: return "NotBidirected";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NotEquilibrium: return "NotEquilibrium";
    case ErrorCode::GraphNotRegular: return "GraphNotRegular";
    case ErrorCode::Condition30Violated: return "Condition30Violated";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above so
/// callers (and the CLI) can branch on the kind without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace synclab
