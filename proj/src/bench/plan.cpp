#include "kgbench/bench/plan.hpp"

#include <algorithm>
#include <unordered_set>

#include "kgbench/error.hpp"
#include "kgbench/rules/measures.hpp"

namespace kgbench::bench {

std::vector<kg::Triple> RemovalPlan::heads() const {
  std::vector<kg::Triple> out;
  out.reserve(removals.size());
  for (const Removal& r : removals) out.push_back(r.head);
  return out;
}

RemovalPlan plan_removals(const kg::KnowledgeGraph& graph, std::span<const rules::Rule> rules,
                          std::size_t per_rule_limit) {
  if (rules.empty()) throw Error(ErrorCode::EmptyPlan, "no rules to plan removals from");
  for (const rules::Rule& rule : rules) rules::require_binary_head(rule);

  RemovalPlan plan;
  std::unordered_set<kg::Triple, kg::TripleHash> heads;
  std::unordered_set<kg::Triple, kg::TripleHash> bodies;
  for (std::size_t i = 0; i < rules.size(); ++i) {
    for (rules::Grounding& g : rules::groundings(rules[i], graph, per_rule_limit)) {
      if (g.head.subject == g.head.object) continue;
      if (std::find(g.body.begin(), g.body.end(), g.head) != g.body.end()) continue;
      if (heads.contains(g.head) || bodies.contains(g.head)) continue;
      if (std::any_of(g.body.begin(), g.body.end(), [&](const kg::Triple& t) { return heads.contains(t); })) {
        continue;
      }
      heads.insert(g.head);
      bodies.insert(g.body.begin(), g.body.end());
      plan.removals.push_back(Removal{g.head, std::move(g.body), i});
    }
  }
  if (plan.removals.empty()) throw Error(ErrorCode::EmptyPlan, "no grounding satisfies the removal constraints");
  return plan;
}

}  // namespace kgbench::bench
