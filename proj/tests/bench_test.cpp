#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "kgbench/bench/builder.hpp"
#include "kgbench/error.hpp"
#include "kgbench/kg/graph_io.hpp"
#include "kgbench/rules/canonical.hpp"
#include "kgbench/rules/miner.hpp"
#include "kgbench/rules/rule_io.hpp"
#include "kgbench/util/random.hpp"
#include "kgbench/util/text.hpp"
#include "support/family.hpp"
#include "support/oracle.hpp"
#include "support/random_graph.hpp"

using namespace kgbench;
using namespace kgbench::bench;
using kg::KnowledgeGraph;
using rules::Rule;
using rules::Term;

namespace {

Term v(std::uint32_t i) { return Term::variable(i); }

KnowledgeGraph parse(const std::string& text) {
  std::istringstream in(text);
  return kg::load_graph(in);
}

Rule table2_rule(const KnowledgeGraph& g) {
  return rules::canonical(Rule{{{g.predicate("fatherOf"), v(0), v(2)}, {g.predicate("uncleOf"), v(1), v(2)}},
                               {g.predicate("brotherOf"), v(0), v(1)},
                               std::nullopt});
}

class ScriptedGenerator final : public llm::QuestionGenerator {
 public:
  using Script = std::function<std::string(const llm::QuestionContext&, unsigned)>;
  explicit ScriptedGenerator(Script script) : script_(std::move(script)) {}
  std::string generate(const llm::QuestionContext& ctx, unsigned attempt) override { return script_(ctx, attempt); }
  std::string name() const override { return "scripted"; }

 private:
  Script script_;
};

// Checks the plan invariants with the brute-force forward chainer.
void expect_plan_sound(const KnowledgeGraph& g, const std::vector<Rule>& rules, const RemovalPlan& plan) {
  std::set<kg::Triple> heads;
  std::set<kg::Triple> bodies;
  for (const Removal& r : plan.removals) {
    EXPECT_TRUE(heads.insert(r.head).second) << "head planned twice";
    bodies.insert(r.witness.begin(), r.witness.end());
  }
  for (const kg::Triple& h : heads) EXPECT_FALSE(bodies.contains(h)) << "a removed head is a witness body";

  KnowledgeGraph incomplete = g.remove(plan.heads());
  std::vector<kg::Triple> remaining(incomplete.triples().begin(), incomplete.triples().end());
  std::map<std::size_t, std::set<kg::Triple>> derived;
  for (const Removal& r : plan.removals) {
    EXPECT_TRUE(g.contains(r.head));
    EXPECT_FALSE(incomplete.contains(r.head));
    for (const kg::Triple& b : r.witness) EXPECT_TRUE(incomplete.contains(b));
    auto [it, fresh] = derived.try_emplace(r.rule_index);
    if (fresh) it->second = fixtures::forward_chain(remaining, rules[r.rule_index]);
    EXPECT_TRUE(it->second.contains(r.head)) << "removed triple not re-derivable";
  }
}

QuestionRecord record(std::string id, std::uint32_t hard) {
  QuestionRecord q;
  q.id = std::move(id);
  q.hard_answer = kg::EntityId{hard};
  q.topic_entity = kg::EntityId{1000};
  q.answers = {q.hard_answer};
  return q;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("kgbench_bench_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

BuildConfig family_config() {
  BuildConfig c;
  c.preset = "family";
  c.seed = 11;
  c.label_variant = kg::LabelScheme::Variant::EntityId;
  return c;
}

}  // namespace

TEST(PlanRemovals, WorkedExample) {
  auto g = fixtures::family_graph();
  std::vector<Rule> rules{table2_rule(g)};
  RemovalPlan plan = plan_removals(g, rules);
  const kg::Triple head{g.entity("139"), g.predicate("brotherOf"), g.entity("205")};
  auto it = std::find_if(plan.removals.begin(), plan.removals.end(), [&](const Removal& r) { return r.head == head; });
  ASSERT_NE(it, plan.removals.end());
  std::vector<kg::Triple> expected{{g.entity("139"), g.predicate("fatherOf"), g.entity("14")},
                                   {g.entity("205"), g.predicate("uncleOf"), g.entity("14")}};
  std::vector<kg::Triple> witness = it->witness;
  std::sort(witness.begin(), witness.end());
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(witness, expected);
  EXPECT_LE(plan.removals.size(), 30U);
  expect_plan_sound(g, rules, plan);
}

TEST(PlanRemovals, RuleWhoseHeadsAreAcceptedBodiesContributesNothing) {
  auto g = parse("a\tp\tb\nb\tq\tc\na\tr\tc\na\ts\tb\n");
  const Rule composition = rules::canonical(
      Rule{{{g.predicate("p"), v(0), v(2)}, {g.predicate("q"), v(2), v(1)}}, {g.predicate("r"), v(0), v(1)}, {}});
  const Rule copy = rules::canonical(Rule{{{g.predicate("s"), v(0), v(1)}}, {g.predicate("p"), v(0), v(1)}, {}});
  std::vector<Rule> rules{composition, copy};
  RemovalPlan plan = plan_removals(g, rules);
  ASSERT_EQ(plan.removals.size(), 1U);
  EXPECT_EQ(plan.removals[0].rule_index, 0U);

  // In the other order the copy rule wins and the composition loses its body.
  std::vector<Rule> swapped{copy, composition};
  plan = plan_removals(g, swapped);
  ASSERT_EQ(plan.removals.size(), 1U);
  EXPECT_EQ(plan.removals[0].rule_index, 0U);
}

TEST(PlanRemovals, DegenerateInputs) {
  auto g = fixtures::family_graph();
  std::vector<Rule> rules{table2_rule(g)};
  try {
    plan_removals(g, rules, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPlan);
  }
  try {
    plan_removals(g, std::vector<Rule>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPlan);
  }
  // A reflexive-only grounding never becomes a question with topic == answer.
  auto loop = parse("a\tp\ta\nb\tq\tc\n");
  std::vector<Rule> self{rules::canonical(Rule{{{loop.predicate("p"), v(1), v(0)}}, {loop.predicate("p"), v(0), v(1)}, {}})};
  try {
    plan_removals(loop, self);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPlan);
  }
}

TEST(PlanRemovals, SoundOnMinedRulesOverSmallRandomGraphs) {
  rules::MinerConfig config;
  config.workers = 1;
  std::size_t planned = 0;
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    auto g = fixtures::random_graph(seed, 100);
    auto rules = rules::mine(g, config);
    if (rules.empty()) continue;
    try {
      RemovalPlan plan = plan_removals(g, rules);
      planned += plan.removals.size();
      expect_plan_sound(g, rules, plan);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::EmptyPlan);
    }
  }
  EXPECT_GT(planned, 0U);
}

TEST(Question, Validation) {
  EXPECT_EQ(question_problem("Who is 139's brother?", "139", "205"), std::nullopt);
  EXPECT_EQ(question_problem("Who is Carol's wife?", "Carol", "Alice"), std::nullopt);
  EXPECT_TRUE(question_problem("Is 205 the brother of 139?", "139", "205"));
  EXPECT_TRUE(question_problem("Is 139 someone's brother?", "139", "205"));
  EXPECT_TRUE(question_problem("  does 139 have a brother?", "139", "205"));
  EXPECT_TRUE(question_problem("Who is the brother?", "139", "205"));
  EXPECT_TRUE(question_problem("", "139", "205"));
  // Whole-word matching: 1391 is not 139 and 2050 is not 205.
  EXPECT_TRUE(question_problem("Who is 1391's brother?", "139", "205"));
  EXPECT_EQ(question_problem("Who is 139's brother, not 2050?", "139", "205"), std::nullopt);
}

TEST(Question, GenerateQuestionUsesDirection) {
  auto g = fixtures::family_graph();
  const kg::Triple t{g.entity("139"), g.predicate("brotherOf"), g.entity("205")};
  llm::TemplateQuestionGenerator tmpl;
  EXPECT_EQ(generate_question(t, kg::Direction::HeadAsTopic, tmpl, g), "Which entity is 139 the brotherOf of?");
  EXPECT_EQ(generate_question(t, kg::Direction::TailAsTopic, tmpl, g), "Which entity is the brotherOf of 205?");

  ScriptedGenerator echo([](const llm::QuestionContext& c, unsigned) { return "Who is " + c.slots.topic_entity + "'s brother?"; });
  EXPECT_EQ(generate_question(t, kg::Direction::HeadAsTopic, echo, g), "Who is 139's brother?");

  ScriptedGenerator leak([](const llm::QuestionContext& c, unsigned) { return "Is " + c.slots.answer_entity + " a brother?"; });
  try {
    generate_question(t, kg::Direction::HeadAsTopic, leak, g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationFailure);
  }
}

TEST(CompleteAnswers, FamilyExample) {
  auto g = fixtures::family_graph();
  auto answers = complete_answers(g, g.entity("139"), g.predicate("brotherOf"), kg::Direction::HeadAsTopic);
  std::set<std::string> labels;
  for (auto a : answers) labels.insert(g.label(a));
  EXPECT_EQ(labels, (std::set<std::string>{"205", "138", "2973", "2974"}));
  EXPECT_TRUE(std::is_sorted(answers.begin(), answers.end()));

  auto parents = complete_answers(g, g.entity("14"), g.predicate("fatherOf"), kg::Direction::TailAsTopic);
  EXPECT_EQ(parents, std::vector<kg::EntityId>{g.entity("139")});

  try {
    complete_answers(g, g.entity("14"), g.predicate("fatherOf"), kg::Direction::HeadAsTopic);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyAnswerSet);
  }
}

TEST(Downsample, TraceOfTenQuestions) {
  std::vector<QuestionRecord> qs;
  for (int i = 0; i < 10; ++i) qs.push_back(record("q" + std::to_string(i), i < 5 ? 0 : static_cast<std::uint32_t>(i)));
  auto out = downsample(qs, {0.2, 5});
  ASSERT_EQ(out.size(), 7U);
  EXPECT_EQ(std::count_if(out.begin(), out.end(), [](const auto& q) { return q.hard_answer == kg::EntityId{0}; }), 2);
  for (int i = 5; i < 10; ++i) {
    EXPECT_TRUE(std::any_of(out.begin(), out.end(), [&](const auto& q) { return q.id == "q" + std::to_string(i); }));
  }
  EXPECT_TRUE(std::is_sorted(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.id < b.id; }));

  auto again = downsample(qs, {0.2, 5});
  ASSERT_EQ(again.size(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(again[i].id, out[i].id);

  EXPECT_EQ(downsample(qs, {1.0, 5}).size(), qs.size());
  EXPECT_THROW(downsample(qs, {0.0, 5}), Error);
  EXPECT_THROW(downsample(qs, {1.5, 5}), Error);
  EXPECT_EQ(balance_cap(0.29, 100), 29U);
  EXPECT_EQ(balance_cap(0.05, 19), 0U);
}

TEST(Downsample, PropertyOnRandomInputs) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    util::Rng rng(seed);
    const std::size_t n = 1 + rng.below(60);
    const double tau = static_cast<double>(1 + rng.below(100)) / 100.0;
    const std::uint64_t answers = 1 + rng.below(8);
    std::vector<QuestionRecord> qs;
    std::map<kg::EntityId, std::size_t> before;
    for (std::size_t i = 0; i < n; ++i) {
      qs.push_back(record(std::to_string(i), static_cast<std::uint32_t>(rng.below(answers))));
      ++before[qs.back().hard_answer];
    }
    const double bound = tau * static_cast<double>(n);
    const std::size_t cap = balance_cap(tau, n);
    auto out = downsample(qs, {tau, seed});
    std::map<kg::EntityId, std::size_t> after;
    for (const auto& q : out) ++after[q.hard_answer];
    for (const auto& [a, count] : before) {
      if (static_cast<double>(count) > bound) {
        EXPECT_EQ(after[a], cap);
      } else {
        EXPECT_EQ(after[a], count);
      }
    }
  }
}

TEST(Split, SizesAndPartition) {
  auto make = [](std::size_t n) {
    std::vector<QuestionRecord> qs;
    for (std::size_t i = 0; i < n; ++i) qs.push_back(record(std::to_string(i), 0));
    return qs;
  };
  auto ten = split(make(10), {}, 3);
  EXPECT_EQ(ten.train.size(), 8U);
  EXPECT_EQ(ten.validation.size(), 1U);
  EXPECT_EQ(ten.test.size(), 1U);

  auto qs = make(5449);
  auto s = split(qs, {}, 3);
  EXPECT_EQ(s.train.size(), 4359U);
  EXPECT_EQ(s.validation.size(), 544U);
  EXPECT_EQ(s.test.size(), 546U);
  std::set<std::string> seen;
  for (const auto* part : {&s.train, &s.validation, &s.test}) {
    for (const auto& q : *part) EXPECT_TRUE(seen.insert(q.id).second);
  }
  EXPECT_EQ(seen.size(), qs.size());

  auto again = split(qs, {}, 3);
  for (std::size_t i = 0; i < s.train.size(); ++i) ASSERT_EQ(s.train[i].id, again.train[i].id);
  auto other = split(qs, {}, 4);
  bool differs = false;
  for (std::size_t i = 0; i < s.train.size() && !differs; ++i) differs = s.train[i].id != other.train[i].id;
  EXPECT_TRUE(differs);

  EXPECT_THROW(split(qs, {0, 0, 0}, 1), Error);
  EXPECT_THROW(split(qs, {-1, 1, 1}, 1), Error);
}

TEST(Build, FamilyBundleIsInferable) {
  auto g = fixtures::family_graph();
  auto rules = rules::mine(g, *rules::MinerConfig::preset("family"));
  llm::TemplateQuestionGenerator tmpl;
  DatasetBundle b = build(g, rules, family_config(), tmpl);

  std::vector<kg::Triple> remaining(b.incomplete.triples().begin(), b.incomplete.triples().end());
  std::map<std::string, std::set<kg::Triple>> derived;
  std::set<std::string> ids;
  std::size_t total = 0;
  for (const auto* part : {&b.splits.train, &b.splits.validation, &b.splits.test}) {
    for (const QuestionRecord& q : *part) {
      ++total;
      EXPECT_TRUE(ids.insert(q.id).second);
      EXPECT_TRUE(b.complete.contains(q.removed_triple));
      EXPECT_FALSE(b.incomplete.contains(q.removed_triple));
      for (const kg::Triple& t : q.witness) EXPECT_TRUE(b.incomplete.contains(t));
      EXPECT_TRUE(std::binary_search(q.answers.begin(), q.answers.end(), q.hard_answer));
      EXPECT_NE(q.topic_entity, q.hard_answer);
      EXPECT_EQ(q.answers, complete_answers(b.complete, q.topic_entity, q.predicate, q.direction));
      EXPECT_EQ(question_problem(q.question, b.complete.label(q.topic_entity), b.complete.label(q.hard_answer)),
                std::nullopt);
      auto [it, fresh] = derived.try_emplace(q.rule);
      if (fresh) it->second = fixtures::forward_chain(remaining, rules::parse_rule(q.rule, b.complete));
      EXPECT_TRUE(it->second.contains(q.removed_triple)) << q.id << " " << q.rule;
    }
  }
  EXPECT_GT(total, 0U);
  EXPECT_EQ(b.manifest["counts"]["questions_after_balancing"].get<std::size_t>(), total);
  EXPECT_EQ(b.complete.size() - b.incomplete.size(), b.manifest["counts"]["removed_triples"].get<std::size_t>());
  EXPECT_EQ(b.manifest["preset"], "family");
  EXPECT_TRUE(b.manifest.contains("balance"));
  EXPECT_TRUE(b.manifest["split"].contains("seed"));
  EXPECT_TRUE(b.manifest["label_scheme"].contains("seed"));
}

TEST(Build, RegenerationFallbackAndFailure) {
  auto g = fixtures::family_graph();
  std::vector<Rule> rules{table2_rule(g)};
  BuildConfig config = family_config();
  config.tau = 1.0;

  ScriptedGenerator second_try([](const llm::QuestionContext& c, unsigned attempt) {
    return attempt == 0 ? "Is " + c.slots.answer_entity + " it?" : "Who is related to " + c.slots.topic_entity + "?";
  });
  auto b = build(g, rules, config, second_try);
  const auto n = b.manifest["counts"]["removed_triples"].get<std::size_t>();
  EXPECT_EQ(b.manifest["counts"]["questions_regenerated"].get<std::size_t>(), n);
  EXPECT_EQ(b.manifest["counts"]["questions_from_fallback"].get<std::size_t>(), 0U);

  ScriptedGenerator always_bad([](const llm::QuestionContext&, unsigned) { return std::string("Yes or no?"); });
  b = build(g, rules, config, always_bad);
  EXPECT_EQ(b.manifest["counts"]["questions_from_fallback"].get<std::size_t>(), n);
  for (const auto& q : b.splits.train) EXPECT_TRUE(q.question.starts_with("Which entity is"));

  ScriptedGenerator broken([](const llm::QuestionContext&, unsigned) -> std::string {
    throw Error(ErrorCode::GeneratorFailure, "service down");
  });
  try {
    build(g, rules, config, broken);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GeneratorFailure);
  }

  config.per_rule_limit = 0;
  llm::TemplateQuestionGenerator tmpl;
  try {
    build(g, rules, config, tmpl);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPlan);
  }
}

TEST(Build, PrivateIdsHideRawLabels) {
  auto g = fixtures::family_graph();
  std::vector<Rule> rules{table2_rule(g)};
  BuildConfig config = family_config();
  config.label_variant = kg::LabelScheme::Variant::PrivateId;
  llm::TemplateQuestionGenerator tmpl;
  auto b = build(g, rules, config, tmpl);
  ASSERT_EQ(b.label_mapping.size(), g.entity_count());
  std::map<std::string, std::string> mapping(b.label_mapping.begin(), b.label_mapping.end());
  for (const auto& q : b.splits.train) {
    const std::string& raw = g.label(q.topic_entity);
    EXPECT_EQ(b.complete.label(q.topic_entity), mapping.at(raw));
    EXPECT_TRUE(util::contains_word(q.question, mapping.at(raw)));
  }
}

TEST(Bundle, RoundTripAndByteDeterminism) {
  auto g = fixtures::family_graph();
  auto rules = rules::mine(g, *rules::MinerConfig::preset("family"));
  llm::TemplateQuestionGenerator tmpl;
  BuildConfig config = family_config();
  config.label_variant = kg::LabelScheme::Variant::PrivateId;
  auto first = scratch("a");
  auto second = scratch("b");
  auto b = build(g, rules, config, tmpl);
  write_bundle(b, first);
  config.workers = 4;
  write_bundle(build(g, rules, config, tmpl), second);
  for (std::string_view f : bundle_files()) {
    EXPECT_EQ(slurp(first / f), slurp(second / f)) << f;
    EXPECT_FALSE(slurp(first / f).empty()) << f;
  }

  auto loaded = load_bundle(first);
  EXPECT_EQ(loaded.complete.size(), b.complete.size());
  EXPECT_EQ(loaded.incomplete.size(), b.incomplete.size());
  ASSERT_EQ(loaded.splits.test.size(), b.splits.test.size());
  for (std::size_t i = 0; i < b.splits.test.size(); ++i) {
    const auto& x = b.splits.test[i];
    const auto& y = loaded.splits.test[i];
    EXPECT_EQ(x.id, y.id);
    EXPECT_EQ(x.question, y.question);
    EXPECT_EQ(b.complete.label(x.hard_answer), loaded.complete.label(y.hard_answer));
    EXPECT_EQ(x.answers.size(), y.answers.size());
    EXPECT_EQ(x.rule_type, y.rule_type);
    EXPECT_EQ(x.direction, y.direction);
    EXPECT_FALSE(loaded.incomplete.contains(y.removed_triple));
  }
  EXPECT_EQ(loaded.manifest, b.manifest);
  EXPECT_EQ(loaded.label_mapping, b.label_mapping);

  // Rewriting a loaded bundle reproduces the question and manifest files.
  auto third = scratch("c");
  write_bundle(loaded, third);
  for (std::string_view f : {kTrainFile, kValidationFile, kTestFile, kManifestFile, kLabelMappingFile}) {
    EXPECT_EQ(slurp(first / f), slurp(third / f)) << f;
  }

  std::ofstream(first / kTrainFile, std::ios::app) << "{\"id\": 3}\n";
  try {
    load_bundle(first);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CorruptBundle);
  }
  std::filesystem::remove(second / kManifestFile);
  EXPECT_THROW(load_bundle(second), Error);
  for (const auto& d : {first, second, third}) std::filesystem::remove_all(d);
}
