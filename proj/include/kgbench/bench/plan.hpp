#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kgbench/kg/graph.hpp"
#include "kgbench/rules/rule.hpp"

namespace kgbench::bench {

struct Removal {
  kg::Triple head;
  std::vector<kg::Triple> witness;  // grounded body that keeps `head` inferable
  std::size_t rule_index = 0;       // into the rules passed to plan_removals
};

struct RemovalPlan {
  std::vector<Removal> removals;

  std::vector<kg::Triple> heads() const;
};

// Greedy plan over the rules in order, taking for each rule its first
// `per_rule_limit` groundings (ascending head triple). A grounding is skipped
// when its head is already planned, when its head is the body of an accepted
// witness, when its body contains an accepted head, or when its head is
// reflexive or appears in its own body.
// EmptyPlan when nothing is accepted; InvalidRule for rules without a
// p(?a, ?b) head.
RemovalPlan plan_removals(const kg::KnowledgeGraph& graph, std::span<const rules::Rule> rules,
                          std::size_t per_rule_limit = 30);

}  // namespace kgbench::bench
