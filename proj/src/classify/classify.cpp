#include "kgbench/classify/classify.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace kgbench::classify {

using rules::Atom;
using rules::Rule;
using rules::Term;

namespace {

constexpr std::array<std::string_view, kRuleTypeCount> kNames{
    "Symmetry", "Inversion", "Hierarchy", "Composition", "LongChain", "Triangle", "Intersection", "Other"};

bool all_variables(const Rule& rule) {
  auto var = [](const Atom& a) { return a.subject.is_variable() && a.object.is_variable(); };
  if (!var(rule.head)) return false;
  for (const Atom& a : rule.body) {
    if (!var(a)) return false;
  }
  return true;
}

bool is(const Atom& a, Term s, Term o) { return a.subject == s && a.object == o; }

// Body atoms form one directed path from x to y through distinct
// intermediate variables.
bool directed_chain(const std::vector<Atom>& body, Term x, Term y) {
  std::vector<bool> used(body.size(), false);
  std::vector<Term> visited{x};
  Term at = x;
  for (std::size_t step = 0; step < body.size(); ++step) {
    std::size_t found = body.size();
    for (std::size_t i = 0; i < body.size(); ++i) {
      if (!used[i] && body[i].subject == at) {
        if (found != body.size()) return false;  // branches
        found = i;
      }
    }
    if (found == body.size()) return false;
    used[found] = true;
    at = body[found].object;
    const bool last = step + 1 == body.size();
    if (last != (at == y)) return false;
    if (std::find(visited.begin(), visited.end(), at) != visited.end()) return false;
    visited.push_back(at);
  }
  return true;
}

}  // namespace

std::string_view to_string(RuleType type) { return kNames[static_cast<std::size_t>(type)]; }

std::optional<RuleType> parse_rule_type(std::string_view text) {
  for (RuleType t : kAllRuleTypes) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

RuleType classify(const Rule& rule) {
  if (!all_variables(rule)) return RuleType::Other;
  const Term x = rule.head.subject;
  const Term y = rule.head.object;
  if (x == y) return RuleType::Other;
  const auto& body = rule.body;

  if (body.size() == 1) {
    const Atom& b = body[0];
    if (is(b, y, x)) return b.predicate == rule.head.predicate ? RuleType::Symmetry : RuleType::Inversion;
    if (is(b, x, y) && b.predicate != rule.head.predicate) return RuleType::Hierarchy;
    return RuleType::Other;
  }
  if (body.size() == 2 && directed_chain(body, x, y)) return RuleType::Composition;
  if (body.size() >= 3 && directed_chain(body, x, y)) return RuleType::LongChain;
  if (body.size() == 2) {
    for (int k = 0; k < 2; ++k) {
      const Atom& a = body[k];
      const Atom& b = body[1 - k];
      const Term z = a.subject;
      if (z != x && z != y && is(a, z, x) && is(b, z, y)) return RuleType::Triangle;
    }
  }
  bool intersection = body.size() >= 2;
  for (const Atom& a : body) intersection = intersection && is(a, x, y);
  if (intersection) return RuleType::Intersection;
  return RuleType::Other;
}

RuleType summary_bucket(RuleType type) {
  switch (type) {
    case RuleType::LongChain:
    case RuleType::Triangle:
    case RuleType::Intersection: return RuleType::Other;
    default: return type;
  }
}

std::uint64_t TypeHistogram::total() const {
  std::uint64_t sum = 0;
  for (std::uint64_t c : counts) sum += c;
  return sum;
}

TypeHistogram type_histogram(std::span<const Rule> rules) {
  TypeHistogram h;
  for (const Rule& r : rules) ++h.counts[static_cast<std::size_t>(summary_bucket(classify(r)))];
  return h;
}

std::string format_histogram(const TypeHistogram& histogram) {
  static constexpr std::array<std::pair<RuleType, std::string_view>, 5> kRows{{
      {RuleType::Symmetry, "Symmetry: r(x,y)=>r(y,x)"},
      {RuleType::Inversion, "Inversion: r1(x,y)=>r2(y,x)"},
      {RuleType::Hierarchy, "Hierarchy: r1(x,y)=>r2(x,y)"},
      {RuleType::Composition, "Composition: r1(x,y)&r2(y,z)=>r3(x,z)"},
      {RuleType::Other, "Other"},
  }};
  std::string out = fmt::format("{:<40}{:>8}\n", "Rule type", "Count");
  for (const auto& [type, label] : kRows) out += fmt::format("{:<40}{:>8}\n", label, histogram[type]);
  out += fmt::format("{:<40}{:>8}\n", "Total", histogram.total());
  return out;
}

}  // namespace kgbench::classify
