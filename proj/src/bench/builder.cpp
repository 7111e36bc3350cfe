#include "kgbench/bench/builder.hpp"

#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <fmt/format.h>

#include "kgbench/classify/classify.hpp"
#include "kgbench/error.hpp"
#include "kgbench/rules/rule_io.hpp"
#include "kgbench/util/random.hpp"

namespace kgbench::bench {

using ojson = nlohmann::ordered_json;

namespace {

// Streams derived from the master seed.
enum Stream : std::uint64_t { kLabels = 1, kDirections = 2, kBalance = 3, kSplit = 4 };

struct Generated {
  std::optional<QuestionRecord> record;
  bool regenerated = false;
  bool fallback = false;
};

Generated generate_one(std::size_t index, const Removal& removal, const rules::Rule& rule,
                       const kg::KnowledgeGraph& original, const kg::KnowledgeGraph& labels,
                       std::uint64_t direction_seed, llm::QuestionGenerator& generator) {
  util::Rng coin(util::mix_seed(direction_seed, index));
  const kg::Direction direction = coin.coin() ? kg::Direction::HeadAsTopic : kg::Direction::TailAsTopic;

  Generated out;
  std::optional<std::string> text;
  for (unsigned attempt = 0; attempt < 2 && !text; ++attempt) {
    try {
      text = generate_question(removal.head, direction, generator, labels, attempt);
      out.regenerated = attempt > 0;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ValidationFailure && e.code() != ErrorCode::EmptyCompletion) throw;
    }
  }
  if (!text) {
    llm::TemplateQuestionGenerator fallback;
    try {
      text = generate_question(removal.head, direction, fallback, labels);
      out.fallback = true;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ValidationFailure) throw;
      return out;
    }
  }

  QuestionRecord q;
  q.id = fmt::format("q{:06}", index);
  q.question = std::move(*text);
  q.topic_entity = topic_of(removal.head, direction);
  q.hard_answer = answer_of(removal.head, direction);
  q.predicate = removal.head.predicate;
  q.direction = direction;
  q.answers = complete_answers(original, q.topic_entity, q.predicate, direction);
  q.rule_type = classify::classify(rule);
  q.removed_triple = removal.head;
  q.rule = rules::format_rule(rule, labels);
  q.witness = removal.witness;
  out.record = std::move(q);
  return out;
}

std::vector<Generated> generate_all(const RemovalPlan& plan, std::span<const rules::Rule> rules,
                                    const kg::KnowledgeGraph& original, const kg::KnowledgeGraph& labels,
                                    std::uint64_t direction_seed, std::size_t workers,
                                    llm::QuestionGenerator& generator) {
  const std::size_t n = plan.removals.size();
  std::vector<Generated> results(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&] {
    for (std::size_t i = next++; i < n && !failed; i = next++) {
      try {
        const Removal& r = plan.removals[i];
        results[i] = generate_one(i, r, rules[r.rule_index], original, labels, direction_seed, generator);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < std::max<std::size_t>(workers, 1); ++w) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

ojson triple_json(const kg::Triple& t, const kg::KnowledgeGraph& labels) {
  return ojson::array({labels.label(t.subject), labels.label(t.predicate), labels.label(t.object)});
}

kg::Triple triple_from_json(const nlohmann::json& j, const kg::KnowledgeGraph& labels) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::CorruptBundle, "triple must be a 3-element array");
  return {labels.entity(j[0].get<std::string>()), labels.predicate(j[1].get<std::string>()),
          labels.entity(j[2].get<std::string>())};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
  out << text;
  if (!out) throw Error(ErrorCode::Io, fmt::format("write to '{}' failed", path.string()));
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::CorruptBundle, fmt::format("missing bundle file '{}'", path.string()));
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string jsonl(const std::vector<QuestionRecord>& records, const kg::KnowledgeGraph& labels) {
  std::string out;
  for (const QuestionRecord& q : records) {
    out += to_json(q, labels).dump();
    out += '\n';
  }
  return out;
}

std::vector<QuestionRecord> read_jsonl(const std::filesystem::path& path, const kg::KnowledgeGraph& labels) {
  std::istringstream in(read_text(path));
  std::vector<QuestionRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(question_from_json(nlohmann::json::parse(line), labels));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::CorruptBundle, fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    } catch (const Error& e) {
      if (e.code() == ErrorCode::CorruptBundle) throw;
      throw Error(ErrorCode::CorruptBundle, fmt::format("{}:{}: {}", path.string(), line_no, e.what()));
    }
  }
  return out;
}

}  // namespace

void BuildConfig::validate() const {
  BalanceConfig{tau, 0}.validate();
  if (workers == 0) throw Error(ErrorCode::InvalidConfig, "workers must be at least 1");
  if (label_variant == kg::LabelScheme::Variant::TextLabel && names == nullptr) {
    throw Error(ErrorCode::InvalidConfig, "text labels need a names table");
  }
}

DatasetBundle build(const kg::KnowledgeGraph& graph, std::span<const rules::Rule> rules, const BuildConfig& config,
                    llm::QuestionGenerator& generator) {
  config.validate();
  const std::uint64_t label_seed = util::mix_seed(config.seed, kLabels);
  const std::uint64_t direction_seed = util::mix_seed(config.seed, kDirections);
  const BalanceConfig balance{config.tau, util::mix_seed(config.seed, kBalance)};
  const std::uint64_t split_seed = util::mix_seed(config.seed, kSplit);

  RemovalPlan plan = plan_removals(graph, rules, config.per_rule_limit);
  const std::vector<kg::Triple> removed = plan.heads();

  kg::RelabelResult relabelled = relabel(graph, kg::LabelScheme{config.label_variant, label_seed}, config.names);
  DatasetBundle bundle{relabelled.graph,
                       graph.remove(removed).with_entity_symbols(relabelled.graph.entity_symbols()),
                       {},
                       std::move(relabelled.mapping),
                       ojson::object()};

  std::vector<Generated> generated =
      generate_all(plan, rules, graph, bundle.complete, direction_seed, config.workers, generator);
  std::vector<QuestionRecord> questions;
  std::size_t dropped = 0, regenerated = 0, fallback = 0;
  for (Generated& g : generated) {
    if (!g.record) {
      ++dropped;
      continue;
    }
    regenerated += g.regenerated ? 1 : 0;
    fallback += g.fallback ? 1 : 0;
    questions.push_back(std::move(*g.record));
  }

  std::vector<QuestionRecord> balanced = downsample(questions, balance);
  bundle.splits = split(balanced, config.ratios, split_seed);

  std::vector<bool> contributing(rules.size(), false);
  for (const Removal& r : plan.removals) contributing[r.rule_index] = true;

  ojson& m = bundle.manifest;
  m["format"] = "kgbench-bundle/1";
  m["preset"] = config.preset;
  m["seed"] = config.seed;
  m["generator"] = generator.name();
  m["plan"] = {{"per_rule_limit", config.per_rule_limit}, {"grounding_order", "ascending head triple"}};
  m["direction"] = {{"policy", "seeded fair coin per removed triple"}, {"seed", direction_seed}};
  m["regeneration"] = "one regeneration, then template fallback; records failing both are dropped";
  m["label_scheme"] = {{"variant", kg::to_string(config.label_variant)}, {"seed", label_seed}};
  m["balance"] = {{"tau", balance.tau},
                  {"seed", balance.seed},
                  {"key", "hard answer"},
                  {"cap", balance_cap(balance.tau, questions.size())}};
  m["split"] = {{"ratios", {config.ratios.train, config.ratios.validation, config.ratios.test}},
                {"seed", split_seed}};
  m["counts"] = {{"complete_triples", bundle.complete.size()},
                 {"incomplete_triples", bundle.incomplete.size()},
                 {"entities", bundle.complete.entity_count()},
                 {"predicates", bundle.complete.predicate_count()},
                 {"rules", rules.size()},
                 {"rules_contributing", std::count(contributing.begin(), contributing.end(), true)},
                 {"removed_triples", removed.size()},
                 {"questions_generated", questions.size()},
                 {"questions_regenerated", regenerated},
                 {"questions_from_fallback", fallback},
                 {"questions_dropped", dropped},
                 {"questions_after_balancing", balanced.size()},
                 {"train", bundle.splits.train.size()},
                 {"validation", bundle.splits.validation.size()},
                 {"test", bundle.splits.test.size()}};
  for (const auto& [key, value] : config.extra.items()) m[key] = value;
  return bundle;
}

ojson to_json(const QuestionRecord& q, const kg::KnowledgeGraph& labels) {
  // Labels in byte order, so the file does not depend on internal ids.
  std::vector<std::string> names;
  for (kg::EntityId a : q.answers) names.push_back(labels.label(a));
  std::sort(names.begin(), names.end());
  ojson answers = names;
  ojson witness = ojson::array();
  for (const kg::Triple& t : q.witness) witness.push_back(triple_json(t, labels));
  ojson j;
  j["id"] = q.id;
  j["question"] = q.question;
  j["topic_entity"] = labels.label(q.topic_entity);
  j["answers"] = std::move(answers);
  j["hard_answer"] = labels.label(q.hard_answer);
  j["predicate"] = labels.label(q.predicate);
  j["rule_type"] = classify::to_string(q.rule_type);
  j["direction"] = to_string(q.direction);
  j["removed_triple"] = triple_json(q.removed_triple, labels);
  j["rule"] = q.rule;
  j["witness"] = std::move(witness);
  return j;
}

QuestionRecord question_from_json(const nlohmann::json& j, const kg::KnowledgeGraph& labels) {
  QuestionRecord q;
  q.id = j.at("id").get<std::string>();
  q.question = j.at("question").get<std::string>();
  q.topic_entity = labels.entity(j.at("topic_entity").get<std::string>());
  for (const auto& a : j.at("answers")) q.answers.push_back(labels.entity(a.get<std::string>()));
  std::sort(q.answers.begin(), q.answers.end());
  q.hard_answer = labels.entity(j.at("hard_answer").get<std::string>());
  q.removed_triple = triple_from_json(j.at("removed_triple"), labels);
  q.predicate = j.contains("predicate") ? labels.predicate(j.at("predicate").get<std::string>())
                                        : q.removed_triple.predicate;
  auto type = classify::parse_rule_type(j.at("rule_type").get<std::string>());
  auto direction = parse_direction(j.at("direction").get<std::string>());
  if (!type || !direction) throw Error(ErrorCode::CorruptBundle, fmt::format("record '{}': bad enum value", q.id));
  q.rule_type = *type;
  q.direction = *direction;
  if (j.contains("rule")) q.rule = j.at("rule").get<std::string>();
  if (j.contains("witness")) {
    for (const auto& t : j.at("witness")) q.witness.push_back(triple_from_json(t, labels));
  }
  if (q.answers.empty() || !std::binary_search(q.answers.begin(), q.answers.end(), q.hard_answer) ||
      q.topic_entity == q.hard_answer) {
    throw Error(ErrorCode::CorruptBundle, fmt::format("record '{}' breaks the answer invariants", q.id));
  }
  return q;
}

std::vector<std::string_view> bundle_files() {
  return {kCompleteFile, kIncompleteFile, kTrainFile, kValidationFile, kTestFile, kManifestFile, kLabelMappingFile};
}

void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  kg::write_graph_file(dir / kCompleteFile, bundle.complete);
  kg::write_graph_file(dir / kIncompleteFile, bundle.incomplete);
  write_text(dir / kTrainFile, jsonl(bundle.splits.train, bundle.complete));
  write_text(dir / kValidationFile, jsonl(bundle.splits.validation, bundle.complete));
  write_text(dir / kTestFile, jsonl(bundle.splits.test, bundle.complete));
  write_text(dir / kManifestFile, bundle.manifest.dump(2) + "\n");
  std::ostringstream mapping;
  kg::write_label_pairs(mapping, bundle.label_mapping);
  write_text(dir / kLabelMappingFile, mapping.str());
}

DatasetBundle load_bundle(const std::filesystem::path& dir) {
  auto graph_file = [&](std::string_view name) {
    try {
      return kg::load_graph_file(dir / name);
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptBundle, e.what());
    }
  };
  DatasetBundle b{graph_file(kCompleteFile), graph_file(kIncompleteFile), {}, {}, ojson::object()};

  // Re-key the incomplete view onto the complete graph's ids.
  std::vector<kg::Triple> kept;
  kept.reserve(b.incomplete.size());
  for (const kg::Triple& t : b.incomplete.triples()) {
    auto s = b.complete.find_entity(b.incomplete.label(t.subject));
    auto p = b.complete.find_predicate(b.incomplete.label(t.predicate));
    auto o = b.complete.find_entity(b.incomplete.label(t.object));
    if (!s || !p || !o || !b.complete.contains({*s, *p, *o})) {
      throw Error(ErrorCode::CorruptBundle, "incomplete graph has a triple missing from the complete graph");
    }
    kept.push_back({*s, *p, *o});
  }
  b.incomplete = kg::KnowledgeGraph(b.complete.entity_symbols(), b.complete.predicate_symbols(), std::move(kept));

  b.splits.train = read_jsonl(dir / kTrainFile, b.complete);
  b.splits.validation = read_jsonl(dir / kValidationFile, b.complete);
  b.splits.test = read_jsonl(dir / kTestFile, b.complete);
  try {
    b.manifest = ojson::parse(read_text(dir / kManifestFile));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptBundle, fmt::format("manifest: {}", e.what()));
  }
  std::istringstream mapping(read_text(dir / kLabelMappingFile));
  std::string line;
  while (std::getline(mapping, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw Error(ErrorCode::CorruptBundle, "label mapping line without a TAB");
    b.label_mapping.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return b;
}

}  // namespace kgbench::bench
