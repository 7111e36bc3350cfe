#include "kgbench/error.hpp"

namespace kgbench {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::NotPresent: return "NotPresent";
    case ErrorCode::MissingLabel: return "MissingLabel";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::InvalidRule: return "InvalidRule";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::ZeroHeadFacts: return "ZeroHeadFacts";
    case ErrorCode::ZeroBodyGroundings: return "ZeroBodyGroundings";
    case ErrorCode::ZeroPcaDenominator: return "ZeroPcaDenominator";
    case ErrorCode::EmptyPlan: return "EmptyPlan";
    case ErrorCode::EmptyAnswerSet: return "EmptyAnswerSet";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::GeneratorFailure: return "GeneratorFailure";
    case ErrorCode::CorruptBundle: return "CorruptBundle";
    case ErrorCode::TransportError: return "TransportError";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::EmptyCompletion: return "EmptyCompletion";
    case ErrorCode::HardNotInGold: return "HardNotInGold";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownQuestionId: return "UnknownQuestionId";
    case ErrorCode::DuplicatePrediction: return "DuplicatePrediction";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace kgbench
