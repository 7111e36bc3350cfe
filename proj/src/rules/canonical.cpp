#include "kgbench/rules/canonical.hpp"

#include <algorithm>

namespace kgbench::rules {

namespace {

Term rename(Term t, const std::vector<std::uint32_t>& mapping) {
  return t.is_variable() ? Term::variable(mapping[t.variable_index()]) : t;
}

Atom rename(const Atom& a, const std::vector<std::uint32_t>& mapping) {
  return Atom{a.predicate, rename(a.subject, mapping), rename(a.object, mapping)};
}

}  // namespace

Rule canonical(const Rule& rule) {
  const std::uint32_t n = rule.variable_count();
  std::vector<bool> used(n, false);
  auto mark = [&](const Atom& a) {
    if (a.subject.is_variable()) used[a.subject.variable_index()] = true;
    if (a.object.is_variable()) used[a.object.variable_index()] = true;
  };
  mark(rule.head);
  for (const Atom& a : rule.body) mark(a);

  constexpr std::uint32_t kUnassigned = UINT32_MAX;
  std::vector<std::uint32_t> mapping(n, kUnassigned);
  std::uint32_t next = 0;
  for (Term t : {rule.head.subject, rule.head.object}) {
    if (t.is_variable() && mapping[t.variable_index()] == kUnassigned) mapping[t.variable_index()] = next++;
  }
  std::vector<std::uint32_t> others;
  for (std::uint32_t v = 0; v < n; ++v) {
    if (used[v] && mapping[v] == kUnassigned) others.push_back(v);
  }

  Rule best;
  best.head = rename(rule.head, mapping);
  bool have_best = false;
  std::vector<Atom> body;
  do {
    for (std::size_t k = 0; k < others.size(); ++k) mapping[others[k]] = next + static_cast<std::uint32_t>(k);
    body.clear();
    for (const Atom& a : rule.body) body.push_back(rename(a, mapping));
    std::sort(body.begin(), body.end());
    if (!have_best || body < best.body) {
      best.body = body;
      have_best = true;
    }
  } while (std::next_permutation(others.begin(), others.end()));

  best.measures = rule.measures;
  return best;
}

std::size_t RuleHash::operator()(const Rule& rule) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  auto mix_atom = [&](const Atom& a) {
    mix(kg::index_of(a.predicate));
    mix(static_cast<std::uint64_t>(a.subject.code()));
    mix(static_cast<std::uint64_t>(a.object.code()));
  };
  mix_atom(rule.head);
  for (const Atom& a : rule.body) mix_atom(a);
  return static_cast<std::size_t>(h);
}

}  // namespace kgbench::rules
