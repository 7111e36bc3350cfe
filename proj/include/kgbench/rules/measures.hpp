#pragma once

#include <cstdint>
#include <vector>

#include "kgbench/kg/graph.hpp"
#include "kgbench/rules/rule.hpp"

namespace kgbench::rules {

// All measures expect a head of the form p(?a, ?b) with two distinct
// variables and raise InvalidRule otherwise.
//
// Counting unit: support counts distinct grounded heads; both confidence
// denominators count distinct bindings of the head-variable pair.

std::uint64_t support(const Rule& rule, const kg::KnowledgeGraph& graph);

// support / |facts of the head predicate|. ZeroHeadFacts if there are none.
double head_coverage(const Rule& rule, const kg::KnowledgeGraph& graph);

// support / |{(x, y) : body holds}|. The rule must be safe.
// ZeroBodyGroundings if the body never holds.
double confidence(const Rule& rule, const kg::KnowledgeGraph& graph);

// support / |{(x, y) : body holds and r(x, y') in G for some y'}|.
// ZeroPcaDenominator if no body binding has a subject with a head fact.
double pca_confidence(const Rule& rule, const kg::KnowledgeGraph& graph);

// Exact counts for a safe rule.
Measures compute_measures(const Rule& rule, const kg::KnowledgeGraph& graph);

struct Grounding {
  std::vector<kg::Triple> body;
  kg::Triple head;

  friend auto operator<=>(const Grounding&, const Grounding&) = default;
};

// Up to `limit` groundings whose body and head are all in the graph: one per
// distinct head triple, heads ascending, and for each head the smallest body
// triple list.
std::vector<Grounding> groundings(const Rule& rule, const kg::KnowledgeGraph& graph, std::size_t limit);

// Counts the confidence denominators of a safe rule with optional early
// exits. Counting stops as soon as a denominator exceeds its cap, which the
// miner derives from its thresholds: past the cap the rule cannot qualify.
class BindingCounter {
 public:
  explicit BindingCounter(const kg::KnowledgeGraph& graph);

  struct Limits {
    std::uint64_t max_pca = UINT64_MAX;
    std::uint64_t max_body = UINT64_MAX;
    bool count_body = true;
  };

  struct Counts {
    std::uint64_t support = 0;
    std::uint64_t pca_bindings = 0;
    std::uint64_t body_bindings = 0;
    bool pca_complete = true;
    bool body_complete = true;
  };

  Counts count(const Rule& rule, const Limits& limits);
  Counts count(const Rule& rule) { return count(rule, Limits{}); }

 private:
  const kg::KnowledgeGraph& graph_;
  std::vector<std::uint32_t> stamps_;
  std::uint32_t epoch_ = 0;

  std::uint32_t next_epoch();
};

// Throws InvalidRule unless the head is p(?a, ?b) with distinct variables.
void require_binary_head(const Rule& rule);

}  // namespace kgbench::rules
