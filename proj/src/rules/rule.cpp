#include "kgbench/rules/rule.hpp"

#include <algorithm>
#include <numeric>

namespace kgbench::rules {

namespace {

template <typename F>
void for_each_atom(const Rule& rule, F&& f) {
  for (const Atom& a : rule.body) f(a);
  f(rule.head);
}

// Occurrence count per variable, counting an atom once even if it uses the
// variable in both positions.
std::vector<std::uint32_t> atom_occurrences(const Rule& rule) {
  std::vector<std::uint32_t> counts(rule.variable_count(), 0);
  for_each_atom(rule, [&](const Atom& a) {
    if (a.subject.is_variable()) ++counts[a.subject.variable_index()];
    if (a.object.is_variable() && a.object != a.subject) ++counts[a.object.variable_index()];
  });
  return counts;
}

}  // namespace

std::uint32_t Rule::variable_count() const {
  std::uint32_t count = 0;
  for_each_atom(*this, [&](const Atom& a) {
    if (a.subject.is_variable()) count = std::max(count, a.subject.variable_index() + 1);
    if (a.object.is_variable()) count = std::max(count, a.object.variable_index() + 1);
  });
  return count;
}

Rule head_only(kg::PredicateId predicate) {
  return Rule{{}, Atom{predicate, Term::variable(0), Term::variable(1)}, std::nullopt};
}

std::vector<std::uint32_t> open_variables(const Rule& rule) {
  std::vector<std::uint32_t> open;
  auto counts = atom_occurrences(rule);
  for (std::uint32_t v = 0; v < counts.size(); ++v) {
    if (counts[v] == 1) open.push_back(v);
  }
  return open;
}

StructuralFlags structural_checks(const Rule& rule) {
  StructuralFlags flags;

  auto counts = atom_occurrences(rule);
  flags.closed = std::all_of(counts.begin(), counts.end(), [](std::uint32_t c) { return c != 1; });

  std::vector<bool> in_body(counts.size(), false);
  for (const Atom& a : rule.body) {
    if (a.subject.is_variable()) in_body[a.subject.variable_index()] = true;
    if (a.object.is_variable()) in_body[a.object.variable_index()] = true;
  }
  flags.safe = (!rule.head.subject.is_variable() || in_body[rule.head.subject.variable_index()]) &&
               (!rule.head.object.is_variable() || in_body[rule.head.object.variable_index()]);

  // Union-find over atoms; two atoms are joined when they share a term.
  std::vector<const Atom*> atoms;
  for_each_atom(rule, [&](const Atom& a) { atoms.push_back(&a); });
  std::vector<std::size_t> parent(atoms.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      const Atom& a = *atoms[i];
      const Atom& b = *atoms[j];
      bool shared = a.subject == b.subject || a.subject == b.object || a.object == b.subject || a.object == b.object;
      if (shared) parent[find(i)] = find(j);
    }
  }
  std::size_t root = find(0);
  flags.connected = true;
  for (std::size_t i = 1; i < atoms.size(); ++i) flags.connected = flags.connected && find(i) == root;
  return flags;
}

}  // namespace kgbench::rules
