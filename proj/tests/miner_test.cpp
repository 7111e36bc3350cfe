#include <gtest/gtest.h>

#include <chrono>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "kgbench/error.hpp"
#include "kgbench/kg/graph_io.hpp"
#include "kgbench/rules/canonical.hpp"
#include "kgbench/rules/measures.hpp"
#include "kgbench/rules/miner.hpp"
#include "kgbench/rules/rule_io.hpp"
#include "support/family.hpp"
#include "support/oracle.hpp"
#include "support/random_graph.hpp"

using namespace kgbench;
using namespace kgbench::rules;
using kg::KnowledgeGraph;

namespace {

Term v(std::uint32_t i) { return Term::variable(i); }

KnowledgeGraph parse(const std::string& text) {
  std::istringstream in(text);
  return kg::load_graph(in);
}

std::string dump(const std::vector<Rule>& rules, const KnowledgeGraph& g) {
  std::ostringstream out;
  write_rules(out, rules, g);
  return out.str();
}

}  // namespace

TEST(MinerConfig, Validation) {
  MinerConfig c;
  EXPECT_NO_THROW(c.validate());
  c.max_length = 1;
  EXPECT_THROW(c.validate(), Error);
  c = MinerConfig{};
  c.min_confidence = 1.5;
  EXPECT_THROW(c.validate(), Error);
  c = MinerConfig{};
  c.min_head_coverage = -0.1;
  EXPECT_THROW(c.validate(), Error);
}

TEST(MinerConfig, Presets) {
  auto family = MinerConfig::preset("family");
  ASSERT_TRUE(family);
  EXPECT_EQ(family->max_length, 3u);
  auto fb = MinerConfig::preset("fb15k237");
  ASSERT_TRUE(fb);
  EXPECT_EQ(fb->max_length, 4u);
  for (const auto& c : {*family, *fb}) {
    EXPECT_DOUBLE_EQ(c.min_confidence, 0.3);
    EXPECT_DOUBLE_EQ(c.min_head_coverage, 0.1);
    EXPECT_DOUBLE_EQ(c.min_pca_confidence, 0.4);
  }
  EXPECT_FALSE(MinerConfig::preset("wikidata"));
}

TEST(Refine, DanglingThenClosingReachesTheSiblingRule) {
  auto g = parse("a\thasParent\tp\np\thasChild\tb\na\thasSibling\tb\n");
  const auto sib = g.predicate("hasSibling");
  const auto parent = g.predicate("hasParent");
  const auto child = g.predicate("hasChild");
  MinerConfig config;
  auto first = refine(head_only(sib), g, config);
  const Rule dangling = canonical(Rule{{{parent, v(0), v(2)}}, {sib, v(0), v(1)}, std::nullopt});
  ASSERT_NE(std::find(first.begin(), first.end(), dangling), first.end());
  auto second = refine(dangling, g, config);
  const Rule closed =
      canonical(Rule{{{parent, v(0), v(2)}, {child, v(2), v(1)}}, {sib, v(0), v(1)}, std::nullopt});
  EXPECT_NE(std::find(second.begin(), second.end(), closed), second.end());
}

TEST(Refine, LengthGuard) {
  auto g = parse("a\tr\tb\n");
  MinerConfig config;
  config.max_length = 2;
  Rule full{{{g.predicate("r"), v(1), v(0)}}, {g.predicate("r"), v(0), v(1)}, std::nullopt};
  EXPECT_TRUE(refine(full, g, config).empty());
}

TEST(Refine, NoDuplicatesModuloRenamingAndNoRepeatedAtoms) {
  auto g = fixtures::random_graph(17);
  MinerConfig config;
  config.max_length = 4;
  std::vector<Rule> frontier{head_only(kg::PredicateId{0})};
  for (int depth = 0; depth < 2; ++depth) {
    std::vector<Rule> next;
    for (const Rule& r : frontier) {
      auto children = refine(r, g, config);
      std::unordered_set<Rule, RuleHash> seen;
      for (const Rule& c : children) {
        EXPECT_TRUE(seen.insert(canonical(c)).second);
        EXPECT_EQ(c.length(), r.length() + 1);
        EXPECT_TRUE(structural_checks(c).connected);
        for (std::size_t i = 0; i < c.body.size(); ++i) {
          EXPECT_NE(c.body[i], c.head);
          for (std::size_t j = i + 1; j < c.body.size(); ++j) EXPECT_NE(c.body[i], c.body[j]);
        }
      }
      next.insert(next.end(), children.begin(), children.end());
    }
    frontier = std::move(next);
  }
}

TEST(Refine, InstantiatedAtomsOnlyWhenEnabled) {
  auto g = parse("a\tr\tb\nc\tr\tb\na\tlivesIn\tparis\n");
  MinerConfig config;
  auto has_constant = [](const std::vector<Rule>& rules) {
    for (const Rule& r : rules) {
      for (const Atom& a : r.body) {
        if (a.subject.is_constant() || a.object.is_constant()) return true;
      }
    }
    return false;
  };
  EXPECT_FALSE(has_constant(refine(head_only(g.predicate("r")), g, config)));
  config.allow_instantiated_atoms = true;
  auto rules = refine(head_only(g.predicate("r")), g, config);
  EXPECT_TRUE(has_constant(rules));
  const Rule paris = canonical(Rule{{{g.predicate("livesIn"), v(0), Term::constant(g.entity("paris"))}},
                                    {g.predicate("r"), v(0), v(1)}, std::nullopt});
  EXPECT_NE(std::find(rules.begin(), rules.end(), paris), rules.end());
}

TEST(Mine, SingleTripleGivesNothing) {
  auto g = parse("a\tr\tb\n");
  EXPECT_TRUE(mine(g, MinerConfig{}).empty());
}

TEST(Mine, PlantedFamilyRule) {
  auto g = fixtures::family_graph();
  const auto start = std::chrono::steady_clock::now();
  auto rules = mine(g, *MinerConfig::preset("family"));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT(seconds, 10.0);
  const Rule planted = canonical(Rule{{{g.predicate("fatherOf"), v(0), v(2)}, {g.predicate("uncleOf"), v(1), v(2)}},
                                      {g.predicate("brotherOf"), v(0), v(1)}, std::nullopt});
  auto it = std::find(rules.begin(), rules.end(), planted);
  ASSERT_NE(it, rules.end());
  ASSERT_TRUE(it->measures);
  EXPECT_GE(it->measures->pca_confidence(), 0.4);
  EXPECT_GE(it->measures->confidence(), 0.3);
  EXPECT_GE(it->measures->head_coverage(), 0.1);
}

TEST(Mine, EveryRuleIsWellFormedAndMeasuresAreExact) {
  auto g = fixtures::family_graph();
  std::vector<kg::Triple> triples(g.triples().begin(), g.triples().end());
  MinerConfig config = *MinerConfig::preset("family");
  auto rules = mine(g, config);
  ASSERT_FALSE(rules.empty());
  for (const Rule& r : rules) {
    EXPECT_TRUE(structural_checks(r).all());
    EXPECT_LE(r.length(), config.max_length);
    ASSERT_TRUE(r.measures);
    const Measures& m = *r.measures;
    EXPECT_EQ(m, compute_measures(r, g));
    EXPECT_LE(m.support, m.head_facts);
    EXPECT_LE(m.support, m.body_bindings);
    EXPECT_LE(m.confidence(), m.pca_confidence());
    EXPECT_LE(m.pca_confidence(), 1.0);
    EXPECT_GE(m.head_coverage(), config.min_head_coverage);
    EXPECT_GE(m.confidence(), config.min_confidence);
    EXPECT_GE(m.pca_confidence(), config.min_pca_confidence);
  }
  EXPECT_TRUE(std::is_sorted(rules.begin(), rules.end(), [](const Rule& a, const Rule& b) {
    return std::tie(a.head.predicate, a.body) < std::tie(b.head.predicate, b.body);
  }));
}

TEST(Mine, SkylineKeepsOnlyStrictImprovements) {
  auto g = fixtures::family_graph();
  auto rules = mine(g, *MinerConfig::preset("family"));
  std::unordered_map<Rule, Measures, RuleHash> index;
  for (const Rule& r : rules) index.emplace(r, *r.measures);
  for (const Rule& r : rules) {
    for (std::size_t skip = 0; skip < r.body.size() && r.body.size() > 1; ++skip) {
      Rule sub{{}, r.head, std::nullopt};
      for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i != skip) sub.body.push_back(r.body[i]);
      }
      auto it = index.find(canonical(sub));
      if (it != index.end()) {
        EXPECT_GT(r.measures->pca_confidence(), it->second.pca_confidence());
      }
    }
  }
}

TEST(Mine, DeterministicAcrossRunsAndWorkerCounts) {
  auto g = fixtures::family_graph();
  MinerConfig config = *MinerConfig::preset("family");
  config.workers = 1;
  const std::string one = dump(mine(g, config), g);
  config.workers = 4;
  const std::string four = dump(mine(g, config), g);
  const std::string again = dump(mine(g, config), g);
  EXPECT_EQ(one, four);
  EXPECT_EQ(four, again);
}

TEST(Mine, HeadCoveragePruningIsMonotone) {
  // support(R') <= support(R) for a refinement R' of R.
  auto g = fixtures::random_graph(31);
  MinerConfig config;
  config.max_length = 3;
  for (std::uint32_t p = 0; p < g.predicate_count(); ++p) {
    Rule root = head_only(kg::PredicateId{p});
    const std::uint64_t root_support = g.with_predicate(root.head.predicate).size();
    for (const Rule& c : refine(root, g, config)) {
      const std::uint64_t s1 = support(c, g);
      EXPECT_LE(s1, root_support);
      for (const Rule& cc : refine(c, g, config)) EXPECT_LE(support(cc, g), s1);
    }
  }
}

TEST(Mine, MatchesOracleOnRandomGraphs) {
  const std::vector<fixtures::OracleThresholds> thresholds{{0.3, 0.1, 0.4}, {0.1, 0.05, 0.2}, {0.5, 0.2, 0.6}};
  std::size_t total = 0;
  for (std::uint64_t seed = 100; seed < 120; ++seed) {
    auto g = fixtures::random_graph(seed);
    const auto& t = thresholds[seed % thresholds.size()];
    MinerConfig config;
    config.max_length = 3;
    config.min_confidence = t.confidence;
    config.min_head_coverage = t.head_coverage;
    config.min_pca_confidence = t.pca_confidence;
    auto got = mine(g, config);
    auto expected = fixtures::oracle_mine(g, t);
    ASSERT_EQ(got.size(), expected.size()) << "seed " << seed << "\n" << dump(got, g) << "---\n" << dump(expected, g);
    for (std::size_t i = 0; i < got.size(); ++i) {
      EXPECT_EQ(got[i], expected[i]) << format_rule(got[i], g) << " vs " << format_rule(expected[i], g);
      EXPECT_EQ(got[i].measures, expected[i].measures);
    }
    total += got.size();
  }
  EXPECT_GT(total, 20u);
}
