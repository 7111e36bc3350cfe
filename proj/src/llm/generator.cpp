#include "kgbench/llm/generator.hpp"

#include "kgbench/error.hpp"

namespace kgbench::llm {

std::string TemplateQuestionGenerator::generate(const QuestionContext& context, unsigned) {
  return template_question(context.slots.topic_entity, context.slots.predicate, context.direction);
}

std::string LlmQuestionGenerator::generate(const QuestionContext& context, unsigned attempt) {
  try {
    return client_.generate(make_request(render_prompt(context.slots), model_, attempt));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::RateLimited || e.code() == ErrorCode::TransportError) {
      throw Error(ErrorCode::GeneratorFailure, e.what());
    }
    throw;
  }
}

}  // namespace kgbench::llm
