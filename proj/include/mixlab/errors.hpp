#pragma once

#include <stdexcept>
#include <string>

namespace mixlab {

/// Failure classes raised by the library. Each value corresponds to one of
/// the documented error conditions of the public operations.
enum class ErrorKind {
  NonZeroMean,
  NegativeInput,
  ConstraintViolation,
  NotIncreasing,
  NotAntiBalanced,
  NoBalancePoint,
  OutOfRange,
  SamplingExhausted,
  NonPositiveEnergy,
  DegenerateState,
  CflViolation,
  StepBudgetExhausted,
  TooFewStates,
  OutOfTimeRange,
  EmptyMixingZone,
  NonzeroFirstVelocity,
  NonzeroVelocity,
  NotInK1,
  HypothesisViolated,
  DimensionMismatch,
  InvalidArgument,
  IoFailure,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NonZeroMean: return "NonZeroMean";
    case ErrorKind::NegativeInput: return "NegativeInput";
    case ErrorKind::ConstraintViolation: return "ConstraintViolation";
    case ErrorKind::NotIncreasing: return "NotIncreasing";
    case ErrorKind::NotAntiBalanced: return "NotAntiBalanced";
    case ErrorKind::NoBalancePoint: return "NoBalancePoint";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::SamplingExhausted: return "SamplingExhausted";
    case ErrorKind::NonPositiveEnergy: return "NonPositiveEnergy";
    case ErrorKind::DegenerateState: return "DegenerateState";
    case ErrorKind::CflViolation: return "CflViolation";
    case ErrorKind::StepBudgetExhausted: return "StepBudgetExhausted";
    case ErrorKind::TooFewStates: return "TooFewStates";
    case ErrorKind::OutOfTimeRange: return "OutOfTimeRange";
    case ErrorKind::EmptyMixingZone: return "EmptyMixingZone";
    case ErrorKind::NonzeroFirstVelocity: return "NonzeroFirstVelocity";
    case ErrorKind::NonzeroVelocity: return "NonzeroVelocity";
    case ErrorKind::NotInK1: return "NotInK1";
    case ErrorKind::HypothesisViolated: return "HypothesisViolated";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::IoFailure: return "IoFailure";
  }
  return "UnknownError";
}

}  // namespace mixlab
