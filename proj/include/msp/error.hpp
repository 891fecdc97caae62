#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace msp {

enum class ErrorCode {
  InvalidGraph,
  InvalidInstance,
  UnreachableNode,
  NotStronglyConnected,
  DimensionMismatch,
  UnroutableCommodity,
  WeightsNotIntegral,
  CapacityTooLargeForDp,
  InvalidEpsilon,
  SearchBudgetExceeded,
  PremiseViolated,
  NonIntegralFlow,
  WrongModeCount,
  BudgetExceedsSamplingRange,
  LayoutNotSingleMode,
  NonUnitWeights,
  MalformedX3c,
  GadgetTooLarge,
  UnboundedObjective,
  SchemaError,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Single exception type for the library; the code drives CLI exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace msp
