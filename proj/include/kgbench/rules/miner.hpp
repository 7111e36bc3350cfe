#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "kgbench/kg/graph.hpp"
#include "kgbench/rules/rule.hpp"

namespace kgbench::rules {

struct MinerConfig {
  double min_confidence = 0.3;
  double min_head_coverage = 0.1;
  double min_pca_confidence = 0.4;
  std::size_t max_length = 3;  // atoms, head included
  bool allow_instantiated_atoms = false;
  std::size_t workers = 0;  // 0: one per hardware thread

  // InvalidConfig unless every ratio is in [0, 1] and max_length >= 2.
  void validate() const;

  // "family" (max_length 3) and "fb15k237" (max_length 4); both use
  // confidence 0.3, head coverage 0.1, PCA confidence 0.4.
  static std::optional<MinerConfig> preset(std::string_view name);
};

// One application of the refinement operators: every rule obtained by adding
// a dangling atom (existing variable + fresh variable), a closing atom (two
// distinct existing variables) or, when enabled, an instantiated atom
// (existing variable + constant seen with that predicate). Atoms identical to
// the head or to a body atom are never added. Results are canonical and
// unique modulo variable renaming. Empty when rule.length() >= max_length.
std::vector<Rule> refine(const Rule& rule, const kg::KnowledgeGraph& graph, const MinerConfig& config);

struct MiningStats {
  std::vector<std::size_t> queue_sizes;  // rules dequeued per length
  std::size_t rules_evaluated = 0;
};

// Breadth-first search over refinements starting from T => r(?0, ?1) for
// every predicate with facts. A dequeued rule is emitted when it is closed,
// meets all three thresholds, and its PCA confidence is strictly higher than
// that of every already-emitted rule with the same head whose body is a
// proper subset of its body. It is refined while shorter than max_length
// unless it is closed with PCA confidence 1. Candidates enter the queue when
// their head coverage meets the threshold and they are not already queued.
//
// Rules come back canonical, with exact measures, ordered by head predicate
// id and then body. The result does not depend on the worker count.
std::vector<Rule> mine(const kg::KnowledgeGraph& graph, const MinerConfig& config, MiningStats* stats = nullptr);

}  // namespace kgbench::rules
