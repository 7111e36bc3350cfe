#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kgbench {

enum class ErrorCode {
  // kg-store
  MalformedLine,
  EmptyGraph,
  NotPresent,
  MissingLabel,
  UnknownLabel,
  // rule-miner
  InvalidRule,
  InvalidConfig,
  ZeroHeadFacts,
  ZeroBodyGroundings,
  ZeroPcaDenominator,
  // bench-builder
  EmptyPlan,
  EmptyAnswerSet,
  ValidationFailure,
  GeneratorFailure,
  CorruptBundle,
  // llm-client
  TransportError,
  RateLimited,
  EmptyCompletion,
  // eval-harness
  HardNotInGold,
  EmptyInput,
  UnknownQuestionId,
  DuplicatePrediction,
  // generic
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a code so callers (and tests)
// can branch on the kind without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace kgbench
