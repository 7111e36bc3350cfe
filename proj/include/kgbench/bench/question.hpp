#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kgbench/classify/classify.hpp"
#include "kgbench/kg/graph.hpp"
#include "kgbench/llm/generator.hpp"

namespace kgbench::bench {

struct QuestionRecord {
  std::string id;
  std::string question;
  kg::EntityId topic_entity{};
  std::vector<kg::EntityId> answers;  // ascending
  kg::EntityId hard_answer{};
  kg::PredicateId predicate{};
  kg::Direction direction = kg::Direction::HeadAsTopic;
  classify::RuleType rule_type = classify::RuleType::Other;
  kg::Triple removed_triple;
  std::string rule;                 // rendered witness rule
  std::vector<kg::Triple> witness;  // grounded body of the witness rule
};

std::string_view to_string(kg::Direction direction);
std::optional<kg::Direction> parse_direction(std::string_view text);

// Topic and answer of a removed triple for a direction.
kg::EntityId topic_of(const kg::Triple& t, kg::Direction d);
kg::EntityId answer_of(const kg::Triple& t, kg::Direction d);

// Checks that a question names the topic (whole word), does not name the
// answer (whole word) and does not open like a yes/no question. Returns the
// reason for rejection, or nullopt.
std::optional<std::string> question_problem(std::string_view question, std::string_view topic,
                                            std::string_view answer);

// One question for `removed` from the generator, validated as above.
// ValidationFailure on rejection; generator errors propagate.
std::string generate_question(const kg::Triple& removed, kg::Direction direction, llm::QuestionGenerator& generator,
                              const kg::KnowledgeGraph& labels, unsigned attempt = 0);

// Every e with (topic, predicate, e) in the graph, or (e, predicate, topic)
// for tail-as-topic; ascending. EmptyAnswerSet if there is none.
std::vector<kg::EntityId> complete_answers(const kg::KnowledgeGraph& complete, kg::EntityId topic,
                                           kg::PredicateId predicate, kg::Direction direction);

struct BalanceConfig {
  double tau = 0.05;
  std::uint64_t seed = 0;

  void validate() const;  // InvalidConfig unless 0 < tau <= 1
};

// Largest per-answer count kept: floor(tau * n), with a 1e-9 guard against
// products such as 0.29 * 100 landing just below an integer.
std::size_t balance_cap(double tau, std::size_t n);

// For every hard answer with more than balance_cap(tau, n) questions, keeps a
// seeded uniform sample of exactly that many; everything else is kept.
// Survivors stay in input order.
std::vector<QuestionRecord> downsample(std::span<const QuestionRecord> questions, const BalanceConfig& config);

struct SplitRatios {
  double train = 8;
  double validation = 1;
  double test = 1;
};

struct Splits {
  std::vector<QuestionRecord> train;
  std::vector<QuestionRecord> validation;
  std::vector<QuestionRecord> test;
};

// Seeded shuffle, then floor(n*train/total) and floor(n*validation/total)
// records, and the rest for test. InvalidConfig on negative ratios or a
// non-positive total.
Splits split(std::span<const QuestionRecord> questions, const SplitRatios& ratios, std::uint64_t seed);

}  // namespace kgbench::bench
