#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

#include "kgbench/kg/graph.hpp"
#include "kgbench/rules/rule.hpp"

namespace kgbench::rules {

inline constexpr std::uint32_t kMaxVariables = 16;

// Partial substitution over rule variables.
class Binding {
 public:
  static constexpr std::uint32_t kUnbound = UINT32_MAX;

  Binding() { values_.fill(kUnbound); }

  bool is_bound(std::uint32_t var) const { return values_[var] != kUnbound; }
  kg::EntityId operator[](std::uint32_t var) const { return kg::EntityId{values_[var]}; }
  void bind(std::uint32_t var, kg::EntityId e) { values_[var] = kg::index_of(e); }
  void unbind(std::uint32_t var) { values_[var] = kUnbound; }

  std::optional<kg::EntityId> resolve(Term t) const {
    if (t.is_constant()) return t.entity();
    if (is_bound(t.variable_index())) return (*this)[t.variable_index()];
    return std::nullopt;
  }

  // Grounds an atom whose terms are all resolvable.
  kg::Triple ground(const Atom& a) const { return {*resolve(a.subject), a.predicate, *resolve(a.object)}; }

 private:
  std::array<std::uint32_t, kMaxVariables> values_;
};

// Backtracking join of a conjunction of atoms against a graph. At each step
// the remaining atom with the fewest candidate triples (given the current
// binding) is expanded next.
class BodyMatcher {
 public:
  BodyMatcher(const kg::KnowledgeGraph& graph, std::span<const Atom> atoms) : graph_(graph), atoms_(atoms) {}

  // Calls visit(const Binding&) for every substitution extending `binding`
  // that grounds all atoms into the graph; visit returns false to stop.
  // Returns false iff enumeration was stopped. `binding` is restored.
  template <typename Visit>
  bool for_each(Binding& binding, Visit&& visit) const {
    const std::uint32_t all = atoms_.empty() ? 0U : ((1U << atoms_.size()) - 1U);
    return step(binding, all, visit);
  }

  bool exists(Binding& binding) const {
    return !for_each(binding, [](const Binding&) { return false; });
  }

 private:
  template <typename Visit>
  bool step(Binding& b, std::uint32_t remaining, Visit& visit) const {
    if (remaining == 0) return visit(static_cast<const Binding&>(b));

    std::size_t best = 0;
    std::size_t best_cost = SIZE_MAX;
    std::span<const kg::Triple> best_range;
    bool best_is_check = false;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (!(remaining & (1U << i))) continue;
      const Atom& a = atoms_[i];
      auto s = b.resolve(a.subject);
      auto o = b.resolve(a.object);
      if (s && o) {
        best = i;
        best_is_check = true;
        best_cost = 0;
        break;
      }
      std::span<const kg::Triple> range = s   ? graph_.with_subject_predicate(*s, a.predicate)
                                          : o ? graph_.with_object_predicate(*o, a.predicate)
                                              : graph_.with_predicate(a.predicate);
      if (range.size() < best_cost) {
        best = i;
        best_cost = range.size();
        best_range = range;
      }
    }

    const Atom& a = atoms_[best];
    const std::uint32_t rest = remaining & ~(1U << best);
    if (best_is_check) {
      if (!graph_.contains(b.ground(a))) return true;
      return step(b, rest, visit);
    }

    const bool bind_subject = a.subject.is_variable() && !b.is_bound(a.subject.variable_index());
    const bool bind_object = a.object.is_variable() && !b.is_bound(a.object.variable_index());
    const bool reflexive = bind_subject && bind_object && a.subject == a.object;
    for (const kg::Triple& t : best_range) {
      if (reflexive && t.subject != t.object) continue;
      if (bind_subject) b.bind(a.subject.variable_index(), t.subject);
      if (bind_object && !reflexive) b.bind(a.object.variable_index(), t.object);
      bool keep_going = step(b, rest, visit);
      if (bind_subject) b.unbind(a.subject.variable_index());
      if (bind_object && !reflexive) b.unbind(a.object.variable_index());
      if (!keep_going) return false;
    }
    return true;
  }

  const kg::KnowledgeGraph& graph_;
  std::span<const Atom> atoms_;
};

}  // namespace kgbench::rules
