#include "kgbench/rules/measures.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "kgbench/error.hpp"
#include "kgbench/rules/matcher.hpp"

namespace kgbench::rules {

void require_binary_head(const Rule& rule) {
  const Atom& h = rule.head;
  if (!h.subject.is_variable() || !h.object.is_variable() || h.subject == h.object) {
    throw Error(ErrorCode::InvalidRule, "head must be p(?a, ?b) with two distinct variables");
  }
  if (rule.variable_count() > kMaxVariables) {
    throw Error(ErrorCode::InvalidRule, fmt::format("rule uses more than {} variables", kMaxVariables));
  }
  if (rule.body.size() > 30) throw Error(ErrorCode::InvalidRule, "rule body is too long");
}

namespace {

void require_safe(const Rule& rule) {
  if (!structural_checks(rule).safe) throw Error(ErrorCode::InvalidRule, "rule is not safe");
}

}  // namespace

std::uint64_t support(const Rule& rule, const kg::KnowledgeGraph& graph) {
  require_binary_head(rule);
  const std::uint32_t xs = rule.head.subject.variable_index();
  const std::uint32_t ys = rule.head.object.variable_index();
  BodyMatcher matcher(graph, rule.body);
  Binding b;
  std::uint64_t count = 0;
  for (const kg::Triple& fact : graph.with_predicate(rule.head.predicate)) {
    b.bind(xs, fact.subject);
    b.bind(ys, fact.object);
    if (matcher.exists(b)) ++count;
  }
  return count;
}

double head_coverage(const Rule& rule, const kg::KnowledgeGraph& graph) {
  require_binary_head(rule);
  const std::size_t facts = graph.with_predicate(rule.head.predicate).size();
  if (facts == 0) throw Error(ErrorCode::ZeroHeadFacts, "head predicate has no facts");
  return static_cast<double>(support(rule, graph)) / static_cast<double>(facts);
}

double confidence(const Rule& rule, const kg::KnowledgeGraph& graph) {
  Measures m = compute_measures(rule, graph);
  if (m.body_bindings == 0) throw Error(ErrorCode::ZeroBodyGroundings, "rule body has no groundings");
  return m.confidence();
}

double pca_confidence(const Rule& rule, const kg::KnowledgeGraph& graph) {
  Measures m = compute_measures(rule, graph);
  if (m.pca_bindings == 0) {
    throw Error(ErrorCode::ZeroPcaDenominator, "no body binding has a subject with a known head fact");
  }
  return m.pca_confidence();
}

Measures compute_measures(const Rule& rule, const kg::KnowledgeGraph& graph) {
  require_binary_head(rule);
  require_safe(rule);
  BindingCounter counter(graph);
  auto counts = counter.count(rule);
  Measures m;
  m.support = counts.support;
  m.head_facts = graph.with_predicate(rule.head.predicate).size();
  m.body_bindings = counts.body_bindings;
  m.pca_bindings = counts.pca_bindings;
  return m;
}

std::vector<Grounding> groundings(const Rule& rule, const kg::KnowledgeGraph& graph, std::size_t limit) {
  require_binary_head(rule);
  std::vector<Grounding> out;
  if (limit == 0) return out;
  const std::uint32_t xs = rule.head.subject.variable_index();
  const std::uint32_t ys = rule.head.object.variable_index();
  BodyMatcher matcher(graph, rule.body);
  Binding b;
  std::vector<kg::Triple> candidate;
  for (const kg::Triple& fact : graph.with_predicate(rule.head.predicate)) {
    b.bind(xs, fact.subject);
    b.bind(ys, fact.object);
    std::optional<std::vector<kg::Triple>> best;
    matcher.for_each(b, [&](const Binding& full) {
      candidate.clear();
      for (const Atom& a : rule.body) candidate.push_back(full.ground(a));
      if (!best || candidate < *best) best = candidate;
      return true;
    });
    if (best) {
      out.push_back(Grounding{std::move(*best), fact});
      if (out.size() == limit) break;
    }
  }
  return out;
}

BindingCounter::BindingCounter(const kg::KnowledgeGraph& graph)
    : graph_(graph), stamps_(graph.entity_count(), 0) {}

std::uint32_t BindingCounter::next_epoch() {
  if (++epoch_ == 0) {
    std::fill(stamps_.begin(), stamps_.end(), 0U);
    epoch_ = 1;
  }
  return epoch_;
}

BindingCounter::Counts BindingCounter::count(const Rule& rule, const Limits& limits) {
  const std::uint32_t xs = rule.head.subject.variable_index();
  const std::uint32_t ys = rule.head.object.variable_index();
  const kg::PredicateId r = rule.head.predicate;
  BodyMatcher matcher(graph_, rule.body);
  Binding b;
  Counts counts;

  // Subjects with at least one head fact: they make up the PCA denominator
  // and are the only place support can come from.
  for (kg::EntityId x : graph_.subjects_of(r)) {
    b.bind(xs, x);
    const std::uint32_t epoch = next_epoch();
    auto heads = graph_.with_subject_predicate(x, r);
    bool within = matcher.for_each(b, [&](const Binding& full) {
      const kg::EntityId y = full[ys];
      std::uint32_t& stamp = stamps_[kg::index_of(y)];
      if (stamp == epoch) return true;
      stamp = epoch;
      if (++counts.pca_bindings > limits.max_pca) return false;
      if (std::binary_search(heads.begin(), heads.end(), kg::Triple{x, r, y})) ++counts.support;
      return true;
    });
    if (!within) {
      counts.pca_complete = false;
      counts.body_complete = false;
      return counts;
    }
  }
  b.unbind(xs);
  counts.body_bindings = counts.pca_bindings;
  if (!limits.count_body) {
    counts.body_complete = false;
    return counts;
  }
  if (counts.body_bindings > limits.max_body) {
    counts.body_complete = false;
    return counts;
  }

  // Remaining subjects come from the smallest body atom that mentions ?x.
  std::span<const kg::EntityId> domain;
  std::vector<kg::EntityId> constant_domain;
  std::size_t domain_size = SIZE_MAX;
  for (const Atom& a : rule.body) {
    std::vector<kg::EntityId> values;
    std::span<const kg::EntityId> candidates;
    if (a.subject == rule.head.subject) {
      if (a.object.is_constant()) {
        for (const kg::Triple& t : graph_.with_object_predicate(a.object.entity(), a.predicate)) {
          values.push_back(t.subject);
        }
      } else {
        candidates = graph_.subjects_of(a.predicate);
      }
    } else if (a.object == rule.head.subject) {
      if (a.subject.is_constant()) {
        for (const kg::Triple& t : graph_.with_subject_predicate(a.subject.entity(), a.predicate)) {
          values.push_back(t.object);
        }
      } else {
        candidates = graph_.objects_of(a.predicate);
      }
    } else {
      continue;
    }
    std::size_t size = a.subject.is_constant() || a.object.is_constant() ? values.size() : candidates.size();
    if (size < domain_size) {
      domain_size = size;
      if (a.subject.is_constant() || a.object.is_constant()) {
        constant_domain = std::move(values);
        domain = constant_domain;
      } else {
        domain = candidates;
      }
    }
  }

  for (kg::EntityId x : domain) {
    if (!graph_.with_subject_predicate(x, r).empty()) continue;
    b.bind(xs, x);
    const std::uint32_t epoch = next_epoch();
    bool within = matcher.for_each(b, [&](const Binding& full) {
      std::uint32_t& stamp = stamps_[kg::index_of(full[ys])];
      if (stamp == epoch) return true;
      stamp = epoch;
      return ++counts.body_bindings <= limits.max_body;
    });
    if (!within) {
      counts.body_complete = false;
      return counts;
    }
  }
  return counts;
}

}  // namespace kgbench::rules
