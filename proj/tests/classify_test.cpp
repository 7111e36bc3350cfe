#include <gtest/gtest.h>

#include "kgbench/classify/classify.hpp"
#include "kgbench/rules/canonical.hpp"
#include "kgbench/util/random.hpp"

namespace kgbench::classify {
using rules::Atom;
using rules::Rule;
using rules::Term;

namespace {

Term v(std::uint32_t i) { return Term::variable(i); }
kg::PredicateId p(std::uint32_t i) { return kg::PredicateId{i}; }

// Head over (x, y) = (?0, ?1); z = ?2, w = ?3.
Rule rule(std::vector<Atom> body, Atom head) { return Rule{std::move(body), head, std::nullopt}; }

}  // namespace

TEST(Classify, TablePatterns) {
  EXPECT_EQ(classify(rule({{p(0), v(1), v(0)}}, {p(0), v(0), v(1)})), RuleType::Symmetry);
  EXPECT_EQ(classify(rule({{p(1), v(1), v(0)}}, {p(0), v(0), v(1)})), RuleType::Inversion);
  EXPECT_EQ(classify(rule({{p(1), v(0), v(1)}}, {p(0), v(0), v(1)})), RuleType::Hierarchy);
  EXPECT_EQ(classify(rule({{p(1), v(0), v(2)}, {p(2), v(2), v(1)}}, {p(0), v(0), v(1)})), RuleType::Composition);
  EXPECT_EQ(classify(rule({{p(2), v(2), v(1)}, {p(1), v(0), v(2)}}, {p(0), v(0), v(1)})), RuleType::Composition);
  EXPECT_EQ(classify(rule({{p(1), v(0), v(2)}, {p(2), v(2), v(3)}, {p(3), v(3), v(1)}}, {p(0), v(0), v(1)})),
            RuleType::LongChain);
  // r1(x,y) & r2(x,z) => r3(y,z), written with the head on (?0, ?1).
  EXPECT_EQ(classify(rule({{p(1), v(2), v(0)}, {p(2), v(2), v(1)}}, {p(3), v(0), v(1)})), RuleType::Triangle);
  EXPECT_EQ(classify(rule({{p(1), v(0), v(1)}, {p(2), v(0), v(1)}}, {p(3), v(0), v(1)})), RuleType::Intersection);
}

TEST(Classify, FallsBackToOther) {
  // Reversed composition direction, mixed directions, reflexive and constant atoms.
  EXPECT_EQ(classify(rule({{p(1), v(2), v(0)}, {p(2), v(2), v(1)}, {p(3), v(0), v(1)}}, {p(0), v(0), v(1)})),
            RuleType::Other);
  EXPECT_EQ(classify(rule({{p(1), v(0), v(2)}, {p(2), v(1), v(2)}}, {p(0), v(0), v(1)})), RuleType::Other);
  EXPECT_EQ(classify(rule({{p(1), v(1), v(0)}, {p(2), v(0), v(1)}}, {p(0), v(0), v(1)})), RuleType::Other);
  EXPECT_EQ(classify(rule({{p(1), v(0), Term::constant(kg::EntityId{3})}}, {p(0), v(0), v(1)})), RuleType::Other);
  EXPECT_EQ(classify(rule({}, {p(0), v(0), v(1)})), RuleType::Other);
}

TEST(Classify, SymmetryWinsOverInversionShape) {
  // Same shape; only the predicate identity differs.
  const Rule sym = rule({{p(4), v(1), v(0)}}, {p(4), v(0), v(1)});
  const Rule inv = rule({{p(5), v(1), v(0)}}, {p(4), v(0), v(1)});
  EXPECT_EQ(classify(sym), RuleType::Symmetry);
  EXPECT_EQ(classify(inv), RuleType::Inversion);
}

TEST(Classify, InvariantUnderRenaming) {
  util::Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const std::uint32_t vars = 4;
    Rule r;
    const auto hs = static_cast<std::uint32_t>(rng.below(vars));
    const auto ho = static_cast<std::uint32_t>((hs + 1 + rng.below(vars - 1)) % vars);
    r.head = {p(static_cast<std::uint32_t>(rng.below(3))), v(hs), v(ho)};
    const std::size_t n = 1 + rng.below(3);
    for (std::size_t k = 0; k < n; ++k) {
      r.body.push_back({p(static_cast<std::uint32_t>(rng.below(3))), v(static_cast<std::uint32_t>(rng.below(vars))),
                        v(static_cast<std::uint32_t>(rng.below(vars)))});
    }
    std::vector<std::uint32_t> perm{0, 1, 2, 3};
    rng.shuffle(std::span<std::uint32_t>(perm));
    Rule renamed = r;
    auto map = [&](Term t) { return v(perm[t.variable_index()]); };
    renamed.head = {r.head.predicate, map(r.head.subject), map(r.head.object)};
    for (Atom& a : renamed.body) a = {a.predicate, map(a.subject), map(a.object)};
    rng.shuffle(std::span<Atom>(renamed.body));
    EXPECT_EQ(classify(r), classify(renamed));
    EXPECT_EQ(classify(r), classify(rules::canonical(r)));
  }
}

TEST(Histogram, EmptyAndPartition) {
  auto empty = type_histogram({});
  EXPECT_EQ(empty.total(), 0u);
  for (RuleType t : kAllRuleTypes) EXPECT_EQ(empty[t], 0u);

  std::vector<Rule> rules{
      rule({{p(0), v(1), v(0)}}, {p(0), v(0), v(1)}),
      rule({{p(1), v(0), v(2)}, {p(2), v(2), v(1)}}, {p(0), v(0), v(1)}),
      rule({{p(1), v(2), v(0)}, {p(2), v(2), v(1)}}, {p(3), v(0), v(1)}),
      rule({{p(1), v(0), v(1)}, {p(2), v(0), v(1)}}, {p(3), v(0), v(1)}),
      rule({{p(1), v(0), v(2)}, {p(2), v(2), v(3)}, {p(3), v(3), v(1)}}, {p(0), v(0), v(1)}),
  };
  auto h = type_histogram(rules);
  EXPECT_EQ(h.total(), rules.size());
  EXPECT_EQ(h[RuleType::Symmetry], 1u);
  EXPECT_EQ(h[RuleType::Composition], 1u);
  EXPECT_EQ(h[RuleType::Other], 3u);
  EXPECT_EQ(h[RuleType::Triangle], 0u);
}

TEST(Histogram, TableLayout) {
  TypeHistogram h;
  h.counts[static_cast<std::size_t>(RuleType::Inversion)] = 6;
  h.counts[static_cast<std::size_t>(RuleType::Composition)] = 56;
  h.counts[static_cast<std::size_t>(RuleType::Other)] = 83;
  const std::string table = format_histogram(h);
  EXPECT_NE(table.find("Inversion: r1(x,y)=>r2(y,x)"), std::string::npos);
  EXPECT_NE(table.find("56\n"), std::string::npos);
  EXPECT_NE(table.find("Total"), std::string::npos);
  EXPECT_NE(table.find("145\n"), std::string::npos);
}

TEST(RuleTypeNames, RoundTrip) {
  for (RuleType t : kAllRuleTypes) EXPECT_EQ(parse_rule_type(to_string(t)), t);
  EXPECT_FALSE(parse_rule_type("Recursive"));
}

}  // namespace kgbench::classify
