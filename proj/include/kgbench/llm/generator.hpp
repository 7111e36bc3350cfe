#pragma once

#include <string>

#include "kgbench/kg/types.hpp"
#include "kgbench/llm/client.hpp"
#include "kgbench/llm/prompt.hpp"

namespace kgbench::llm {

// Everything a generator may use about one removed triple, as rendered labels.
struct QuestionContext {
  PromptSlots slots;
  kg::Direction direction = kg::Direction::HeadAsTopic;
};

class QuestionGenerator {
 public:
  virtual ~QuestionGenerator() = default;
  // `attempt` is 0 for the first try and increases on regeneration.
  virtual std::string generate(const QuestionContext& context, unsigned attempt) = 0;
  virtual std::string name() const = 0;
};

class TemplateQuestionGenerator final : public QuestionGenerator {
 public:
  std::string generate(const QuestionContext& context, unsigned attempt) override;
  std::string name() const override { return "template"; }
};

// Renders the prompt and asks the client. Transport failures that survive the
// client's retries become GeneratorFailure; EmptyCompletion passes through.
class LlmQuestionGenerator final : public QuestionGenerator {
 public:
  LlmQuestionGenerator(LlmClient& client, std::string model) : client_(client), model_(std::move(model)) {}
  std::string generate(const QuestionContext& context, unsigned attempt) override;
  std::string name() const override { return "llm:" + model_; }

 private:
  LlmClient& client_;
  std::string model_;
};

}  // namespace kgbench::llm
