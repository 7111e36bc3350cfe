#include "kgbench/llm/prompt.hpp"

#include <fmt/format.h>

#include "kgbench/error.hpp"

namespace kgbench::llm {

namespace {

constexpr std::string_view kTemplate = R"(You are an expert in knowledge graph question generation.

Given:
Removed Triple: ({entity_h}, {predicate_T}, {entity_t})
Question Entity: {topic_entity}
Answer Entity: {answer_entity}

Write a clear, natural-language question that asks for the Answer Entity, using the given predicate and Topic Entity.

Requirements:
- Express the predicate {predicate_T} naturally (paraphrasing allowed, but preserve core meaning; e.g., "wife_of" -> "wife").
- Mention the Topic Entity {topic_entity}.
- The answer should be the Answer Entity {answer_entity}.
- Do not mention the Answer Entity {answer_entity} in the question.
- Do not ask a yes/no question.
- Output only the question as plain text.

Example:
Removed Triple: ("Alice", "wife_of", "Carol")
Question Entity: Carol
Answer Entity: Alice

Output:
Who is Carol's wife?

Now, generate the question for:
Removed Triple: ({entity_h}, {predicate_T}, {entity_t})
Question Entity: {topic_entity}
Answer Entity: {answer_entity})";

const std::string& label_or_throw(const kg::KnowledgeGraph& g, kg::EntityId e) {
  if (kg::index_of(e) >= g.entity_count() || g.label(e).empty()) {
    throw Error(ErrorCode::MissingLabel, fmt::format("entity {} has no label", kg::index_of(e)));
  }
  return g.label(e);
}

const std::string& label_or_throw(const kg::KnowledgeGraph& g, kg::PredicateId p) {
  if (kg::index_of(p) >= g.predicate_count() || g.label(p).empty()) {
    throw Error(ErrorCode::MissingLabel, fmt::format("predicate {} has no label", kg::index_of(p)));
  }
  return g.label(p);
}

}  // namespace

std::string render_prompt(const PromptSlots& slots) {
  // Single pass, so slot values that look like placeholders stay literal.
  std::string out;
  out.reserve(kTemplate.size() + 256);
  std::size_t i = 0;
  while (i < kTemplate.size()) {
    if (kTemplate[i] == '{') {
      const std::size_t close = kTemplate.find('}', i);
      const std::string_view key = kTemplate.substr(i + 1, close - i - 1);
      const std::string* value = key == "entity_h"        ? &slots.entity_h
                                 : key == "predicate_T"   ? &slots.predicate
                                 : key == "entity_t"      ? &slots.entity_t
                                 : key == "topic_entity"  ? &slots.topic_entity
                                 : key == "answer_entity" ? &slots.answer_entity
                                                          : nullptr;
      if (value) {
        out += *value;
        i = close + 1;
        continue;
      }
    }
    out += kTemplate[i++];
  }
  return out;
}

PromptSlots prompt_slots(const kg::Triple& removed, kg::EntityId topic, kg::EntityId answer,
                         const kg::KnowledgeGraph& labels) {
  return PromptSlots{label_or_throw(labels, removed.subject), label_or_throw(labels, removed.predicate),
                     label_or_throw(labels, removed.object), label_or_throw(labels, topic),
                     label_or_throw(labels, answer)};
}

std::string render_prompt(const kg::Triple& removed, kg::EntityId topic, kg::EntityId answer,
                          const kg::KnowledgeGraph& labels) {
  return render_prompt(prompt_slots(removed, topic, answer, labels));
}

std::string template_question(std::string_view topic, std::string_view predicate, kg::Direction direction) {
  if (direction == kg::Direction::HeadAsTopic) return fmt::format("Which entity is {} the {} of?", topic, predicate);
  return fmt::format("Which entity is the {} of {}?", predicate, topic);
}

std::string template_fallback(const kg::Triple& removed, kg::Direction direction, const kg::KnowledgeGraph& labels) {
  const kg::EntityId topic = direction == kg::Direction::HeadAsTopic ? removed.subject : removed.object;
  return template_question(label_or_throw(labels, topic), label_or_throw(labels, removed.predicate), direction);
}

}  // namespace kgbench::llm
