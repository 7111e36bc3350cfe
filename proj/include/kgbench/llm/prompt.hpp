#pragma once

#include <string>

#include "kgbench/kg/graph.hpp"

namespace kgbench::llm {

struct PromptSlots {
  std::string entity_h;
  std::string predicate;
  std::string entity_t;
  std::string topic_entity;
  std::string answer_entity;
};

// The question-generation prompt with every slot substituted verbatim.
std::string render_prompt(const PromptSlots& slots);

// Resolves the slots from graph labels. topic and answer must be the two ends
// of `removed`. MissingLabel if an id has no (non-empty) label.
PromptSlots prompt_slots(const kg::Triple& removed, kg::EntityId topic, kg::EntityId answer,
                         const kg::KnowledgeGraph& labels);
std::string render_prompt(const kg::Triple& removed, kg::EntityId topic, kg::EntityId answer,
                          const kg::KnowledgeGraph& labels);

// Offline question naming the topic and predicate, never the answer:
//   head as topic: "Which entity is {topic} the {predicate} of?"
//   tail as topic: "Which entity is the {predicate} of {topic}?"
std::string template_question(std::string_view topic, std::string_view predicate, kg::Direction direction);
std::string template_fallback(const kg::Triple& removed, kg::Direction direction, const kg::KnowledgeGraph& labels);

}  // namespace kgbench::llm
