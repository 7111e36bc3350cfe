#include "kgbench/cli/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "kgbench/bench/builder.hpp"
#include "kgbench/classify/classify.hpp"
#include "kgbench/error.hpp"
#include "kgbench/eval/metrics.hpp"
#include "kgbench/kg/graph_io.hpp"
#include "kgbench/kg/relabel.hpp"
#include "kgbench/llm/client.hpp"
#include "kgbench/llm/generator.hpp"
#include "kgbench/rules/miner.hpp"
#include "kgbench/rules/rule_io.hpp"
#include "kgbench/util/text.hpp"

namespace kgbench::cli {

namespace fs = std::filesystem;

namespace {

const std::vector<std::string> kPresets = {"family", "fb15k237"};

std::string display_name(const std::string& preset) {
  if (preset == "family") return "Family";
  if (preset == "fb15k237") return "FB15k-237";
  return preset;
}

std::optional<std::string> env(std::string_view name) {
  const char* v = std::getenv(std::string(name).c_str());
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

std::size_t hardware_workers() { return std::max(1U, std::thread::hardware_concurrency()); }

bench::SplitRatios parse_ratios(const std::string& text) {
  auto parts = util::split(text, ':');
  if (parts.size() != 3) throw Error(ErrorCode::InvalidConfig, fmt::format("split '{}' is not a:b:c", text));
  double v[3];
  for (int i = 0; i < 3; ++i) {
    try {
      v[i] = std::stod(std::string(parts[static_cast<std::size_t>(i)]));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("split '{}' is not a:b:c", text));
    }
  }
  return {v[0], v[1], v[2]};
}

// ---- mine

struct MineArgs {
  std::string graph;
  std::string out;
  std::string histogram;
  std::string preset;
  double min_confidence = 0;
  double min_head_coverage = 0;
  double min_pca = 0;
  std::size_t max_length = 0;
  bool instantiated = false;
  std::size_t workers = 0;
};

int cmd_mine(const MineArgs& a, const CLI::App& sub, std::ostream& out) {
  rules::MinerConfig config = a.preset.empty() ? rules::MinerConfig{} : *rules::MinerConfig::preset(a.preset);
  if (sub.count("--min-conf")) config.min_confidence = a.min_confidence;
  if (sub.count("--min-hc")) config.min_head_coverage = a.min_head_coverage;
  if (sub.count("--min-pca")) config.min_pca_confidence = a.min_pca;
  if (sub.count("--max-len")) config.max_length = a.max_length;
  if (sub.count("--instantiated")) config.allow_instantiated_atoms = a.instantiated;
  config.workers = sub.count("--workers") ? a.workers : hardware_workers();
  config.validate();

  kg::KnowledgeGraph graph = kg::load_graph_file(a.graph);
  std::vector<rules::Rule> mined = rules::mine(graph, config);

  std::vector<std::string> header = {
      "kgbench mine",
      fmt::format("preset: {}", a.preset.empty() ? "custom" : a.preset),
      fmt::format("min_confidence: {}", config.min_confidence),
      fmt::format("min_head_coverage: {}", config.min_head_coverage),
      fmt::format("min_pca_confidence: {}", config.min_pca_confidence),
      fmt::format("max_length: {}", config.max_length),
      fmt::format("instantiated_atoms: {}", config.allow_instantiated_atoms),
      fmt::format("graph_triples: {}", graph.size()),
      fmt::format("rules: {}", mined.size()),
  };
  try {
    rules::write_rules_file(a.out, mined, graph, header);
    const std::string histogram = classify::format_histogram(classify::type_histogram(mined));
    if (!a.histogram.empty()) {
      std::ofstream h(a.histogram, std::ios::binary);
      if (!h) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", a.histogram));
      for (const auto& line : header) h << "# " << line << '\n';
      h << histogram;
    }
    for (const auto& line : header) out << "# " << line << '\n';
    out << "# workers: " << config.workers << '\n' << histogram;
  } catch (...) {
    std::error_code ec;
    fs::remove(a.out, ec);
    if (!a.histogram.empty()) fs::remove(a.histogram, ec);
    throw;
  }
  return 0;
}

// ---- build

struct BuildArgs {
  std::string graph;
  std::string rules;
  std::string out;
  std::string preset;
  std::uint64_t seed = 0;
  double tau = 0.05;
  std::size_t per_rule_limit = 30;
  std::string split = "8:1:1";
  std::string label_scheme = "private-id";
  std::string names;
  std::string generator = "template";
  std::string model;
  std::string transcript;
  std::size_t workers = 0;
};

// Removes what a failed build wrote, leaving pre-existing content alone.
class OutputGuard {
 public:
  explicit OutputGuard(fs::path dir) : dir_(std::move(dir)), created_(!fs::exists(dir_)) {}
  ~OutputGuard() {
    if (committed_) return;
    std::error_code ec;
    if (created_) {
      fs::remove_all(dir_, ec);
      return;
    }
    for (std::string_view f : bench::bundle_files()) fs::remove(dir_ / f, ec);
  }
  void commit() { committed_ = true; }

 private:
  fs::path dir_;
  bool created_;
  bool committed_ = false;
};

int cmd_build(const BuildArgs& a, std::ostream& out) {
  auto variant = kg::parse_label_variant(a.label_scheme);
  if (!variant) throw Error(ErrorCode::InvalidConfig, fmt::format("unknown label scheme '{}'", a.label_scheme));

  bench::BuildConfig config;
  config.preset = a.preset.empty() ? "custom" : a.preset;
  config.seed = a.seed;
  config.tau = a.tau;
  config.per_rule_limit = a.per_rule_limit;
  config.ratios = parse_ratios(a.split);
  config.label_variant = *variant;
  config.workers = a.workers ? a.workers : hardware_workers();
  kg::LabelMap names;
  if (!a.names.empty()) {
    names = kg::read_label_map_file(a.names);
    config.names = &names;
  }
  config.validate();

  // LLM preconditions are checked before any input is read.
  std::optional<std::string> endpoint = env(llm::kEndpointEnv);
  std::string model = a.model.empty() ? env(llm::kModelEnv).value_or(std::string(llm::kDefaultModel)) : a.model;
  if (a.generator == "llm") {
    if (!endpoint && (a.transcript.empty() || !fs::exists(a.transcript))) {
      throw Error(ErrorCode::InvalidConfig,
                  fmt::format("--generator llm needs {} or an existing --transcript to replay", llm::kEndpointEnv));
    }
  } else if (!a.transcript.empty()) {
    throw Error(ErrorCode::InvalidConfig, "--transcript only applies to --generator llm");
  }
  if (fs::exists(a.out) && (!fs::is_directory(a.out) || !fs::is_empty(a.out))) {
    throw Error(ErrorCode::InvalidConfig, fmt::format("output '{}' exists and is not an empty directory", a.out));
  }

  kg::KnowledgeGraph graph = kg::load_graph_file(a.graph);
  std::vector<rules::Rule> rules = rules::read_rules_file(a.rules, graph);

  std::unique_ptr<llm::Transport> transport;
  std::unique_ptr<llm::Transcript> transcript;
  std::unique_ptr<llm::LlmClient> client;
  std::unique_ptr<llm::QuestionGenerator> generator;
  if (a.generator == "llm") {
    if (endpoint) transport = llm::make_http_transport(*endpoint, env(llm::kApiKeyEnv).value_or(""));
    transcript = a.transcript.empty() ? std::make_unique<llm::Transcript>()
                                      : std::make_unique<llm::Transcript>(fs::path(a.transcript));
    client = std::make_unique<llm::LlmClient>(transport.get(), *transcript);
    generator = std::make_unique<llm::LlmQuestionGenerator>(*client, model);
  } else {
    generator = std::make_unique<llm::TemplateQuestionGenerator>();
  }

  config.extra["inputs"] = {{"graph_triples", graph.size()}, {"rules", rules.size()}};
  if (!a.preset.empty()) {
    const rules::MinerConfig m = *rules::MinerConfig::preset(a.preset);
    config.extra["miner_preset"] = {{"min_confidence", m.min_confidence},
                                    {"min_head_coverage", m.min_head_coverage},
                                    {"min_pca_confidence", m.min_pca_confidence},
                                    {"max_length", m.max_length}};
  }

  OutputGuard guard(a.out);
  bench::DatasetBundle bundle = bench::build(graph, rules, config, *generator);
  bench::write_bundle(bundle, a.out);
  guard.commit();

  const auto& c = bundle.manifest["counts"];
  out << "# kgbench build\n"
      << "# preset: " << config.preset << "\n"
      << "# seed: " << config.seed << "\n"
      << "# tau: " << config.tau << "\n"
      << "# per_rule_limit: " << config.per_rule_limit << "\n"
      << "# split: " << a.split << "\n"
      << "# label_scheme: " << kg::to_string(config.label_variant) << "\n"
      << "# generator: " << generator->name() << "\n"
      << "# workers: " << config.workers << "\n";
  for (const auto& [key, value] : c.items()) out << fmt::format("{:<28}{}\n", key, value.dump());
  if (client) out << fmt::format("{:<28}{}\n", "network_calls", client->network_calls());
  return 0;
}

// ---- evaluate

struct EvaluateArgs {
  std::string bundle;
  std::string predictions;
  std::string split = "test";
  std::string kg_setting = "incomplete";
  std::string empty_precision = "zero";
  std::string breakdown;
  std::string report;
  bool split_on_spaces = false;
};

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  bench::DatasetBundle bundle = bench::load_bundle(a.bundle);
  const std::vector<bench::QuestionRecord>& records = a.split == "train"        ? bundle.splits.train
                                                      : a.split == "validation" ? bundle.splits.validation
                                                                                : bundle.splits.test;
  std::vector<eval::EvalQuestion> questions = eval::eval_questions(records, bundle.complete);
  std::vector<eval::RawPrediction> predictions = eval::read_predictions_file(a.predictions);

  std::set<std::string> known;
  for (const auto& q : questions) known.insert(q.id);
  std::vector<std::string> unknown;
  for (const auto& p : predictions) {
    if (!known.contains(p.question_id)) unknown.push_back(p.question_id);
  }
  if (!unknown.empty()) {
    err << "error: " << unknown.size() << " prediction(s) with unknown question ids:";
    for (const auto& id : unknown) err << ' ' << id;
    err << '\n';
    return 1;
  }

  eval::EvalOptions options;
  options.split_on_spaces = a.split_on_spaces;
  options.empty_precision = a.empty_precision == "skip" ? eval::EmptyPrecision::Skip : eval::EmptyPrecision::Zero;
  options.kg_setting = a.kg_setting;
  if (bundle.manifest.contains("label_scheme")) {
    options.label_scheme = bundle.manifest["label_scheme"].value("variant", "unspecified");
  }
  eval::RunReport report = eval::evaluate_run(questions, predictions, options);

  if (!a.report.empty()) {
    nlohmann::ordered_json j;
    j["bundle_preset"] = bundle.manifest.value("preset", "custom");
    j["split"] = a.split;
    const nlohmann::ordered_json body = eval::to_json(report);
    for (const auto& [k, v] : body.items()) j[k] = v;
    std::ofstream f(a.report, std::ios::binary);
    if (!f) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", a.report));
    f << j.dump(2) << '\n';
  }
  out << "# kgbench evaluate\n# split: " << a.split << "\n# delimiters: "
      << (a.split_on_spaces ? "comma, semicolon, newline, space" : "comma, semicolon, newline") << "\n"
      << "# empty_precision: " << a.empty_precision << "\n"
      << eval::format_summary(report, a.breakdown == "rule-type");
  return 0;
}

// ---- stats

int cmd_stats(const std::string& dir, const std::string& name, std::ostream& out) {
  bench::DatasetBundle b = bench::load_bundle(dir);
  const std::string base = name.empty() ? display_name(b.manifest.value("preset", "custom")) : name;
  const std::size_t train = b.splits.train.size(), val = b.splits.validation.size(), test = b.splits.test.size();
  const auto row = [&](const std::string& dataset, std::size_t triples) {
    out << fmt::format("{:<28}{:>12}{:>10}{:>8}{:>8}{:>12}\n", dataset, util::with_thousands(triples),
                       util::with_thousands(train), util::with_thousands(val), util::with_thousands(test),
                       util::with_thousands(train + val + test));
  };
  out << fmt::format("{:<28}{:>12}{:>10}{:>8}{:>8}{:>12}\n", "Dataset", "#Triples", "Train", "Val", "Test",
                     "Total Qs");
  row(base + "-Complete", b.complete.size());
  row(base + "-Incomplete", b.incomplete.size());
  return 0;
}

// ---- relabel

struct RelabelArgs {
  std::string graph;
  std::string out;
  std::string mapping;
  std::string scheme = "private-id";
  std::string names;
  std::uint64_t seed = 0;
};

int cmd_relabel(const RelabelArgs& a, std::ostream& out) {
  auto variant = kg::parse_label_variant(a.scheme);
  if (!variant) throw Error(ErrorCode::InvalidConfig, fmt::format("unknown label scheme '{}'", a.scheme));
  kg::LabelMap names;
  if (!a.names.empty()) names = kg::read_label_map_file(a.names);
  kg::KnowledgeGraph graph = kg::load_graph_file(a.graph);
  kg::RelabelResult r = kg::relabel(graph, {*variant, a.seed}, a.names.empty() ? nullptr : &names);
  try {
    kg::write_graph_file(a.out, r.graph);
    if (!a.mapping.empty()) {
      std::ofstream m(a.mapping, std::ios::binary);
      if (!m) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", a.mapping));
      kg::write_label_pairs(m, r.mapping);
    }
  } catch (...) {
    std::error_code ec;
    fs::remove(a.out, ec);
    if (!a.mapping.empty()) fs::remove(a.mapping, ec);
    throw;
  }
  out << "# kgbench relabel\n# scheme: " << kg::to_string(*variant) << "\n# seed: " << a.seed << "\n"
      << "entities: " << r.graph.entity_count() << "\ntriples: " << r.graph.size() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark construction and evaluation for reasoning over incomplete knowledge graphs", "kgbench"};
  app.require_subcommand(1);

  MineArgs mine;
  auto* m = app.add_subcommand("mine", "Mine Horn rules and print a rule-type histogram");
  m->add_option("graph", mine.graph, "Triple file (subject TAB predicate TAB object)")->required();
  m->add_option("-o,--out", mine.out, "Rule file to write")->required();
  m->add_option("--histogram", mine.histogram, "Also write the histogram to this file");
  m->add_option("--preset", mine.preset, "Threshold preset")->check(CLI::IsMember(kPresets));
  m->add_option("--min-conf", mine.min_confidence, "Standard confidence threshold");
  m->add_option("--min-hc", mine.min_head_coverage, "Head coverage threshold");
  m->add_option("--min-pca", mine.min_pca, "PCA confidence threshold");
  m->add_option("--max-len", mine.max_length, "Maximum rule length, head included");
  m->add_flag("--instantiated", mine.instantiated, "Allow atoms with one constant");
  m->add_option("--workers", mine.workers, "Worker threads (default: hardware threads)");

  BuildArgs build;
  auto* b = app.add_subcommand("build", "Build a benchmark bundle from a graph and a rule file");
  b->add_option("graph", build.graph, "Complete triple file")->required();
  b->add_option("--rules", build.rules, "Rule file from `mine`")->required();
  b->add_option("-o,--out", build.out, "Bundle directory (new or empty)")->required();
  b->add_option("--preset", build.preset, "Dataset preset recorded in the manifest")->check(CLI::IsMember(kPresets));
  b->add_option("--seed", build.seed, "Master seed");
  b->add_option("--tau", build.tau, "Balancing threshold in (0, 1]");
  b->add_option("--per-rule-limit", build.per_rule_limit, "Groundings considered per rule");
  b->add_option("--split", build.split, "Train:validation:test ratios");
  b->add_option("--label-scheme", build.label_scheme, "private-id | entity-id | text-label");
  b->add_option("--names", build.names, "Entity names (raw id TAB name) for text-label");
  b->add_option("--generator", build.generator, "Question generator")
      ->check(CLI::IsMember({"template", "llm"}));
  b->add_option("--model", build.model, "Model name for --generator llm");
  b->add_option("--transcript", build.transcript, "Completion cache (JSON lines); replayed and appended to");
  b->add_option("--workers", build.workers, "Concurrent question generations");

  EvaluateArgs evaluate;
  auto* e = app.add_subcommand("evaluate", "Score predictions against a bundle split");
  e->add_option("bundle", evaluate.bundle, "Bundle directory")->required();
  e->add_option("--predictions", evaluate.predictions, "question_id TAB raw_text lines")->required();
  e->add_option("--split", evaluate.split, "Split to score")->check(CLI::IsMember({"train", "validation", "test"}));
  e->add_option("--kg-setting", evaluate.kg_setting, "KG the predictions were made against")
      ->check(CLI::IsMember({"complete", "incomplete"}));
  e->add_option("--empty-precision", evaluate.empty_precision, "Precision of an empty prediction")
      ->check(CLI::IsMember({"zero", "skip"}));
  e->add_option("--breakdown", evaluate.breakdown, "Per-group HHR table")->check(CLI::IsMember({"rule-type"}));
  e->add_option("--report", evaluate.report, "JSON report to write");
  e->add_flag("--split-on-spaces", evaluate.split_on_spaces, "Also split raw output on spaces");

  std::string stats_dir, stats_name;
  auto* s = app.add_subcommand("stats", "Triple and question counts of a bundle");
  s->add_option("bundle", stats_dir, "Bundle directory")->required();
  s->add_option("--name", stats_name, "Dataset name for the table");

  RelabelArgs relabel;
  auto* r = app.add_subcommand("relabel", "Rewrite entity labels under a label scheme");
  r->add_option("graph", relabel.graph, "Triple file")->required();
  r->add_option("-o,--out", relabel.out, "Relabelled triple file")->required();
  r->add_option("--mapping", relabel.mapping, "Old TAB new label file to write");
  r->add_option("--scheme", relabel.scheme, "private-id | entity-id | text-label");
  r->add_option("--names", relabel.names, "Entity names (raw id TAB name) for text-label");
  r->add_option("--seed", relabel.seed, "Seed for private ids");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err) == 0 ? 0 : 1;
  }

  try {
    if (m->parsed()) return cmd_mine(mine, *m, out);
    if (b->parsed()) return cmd_build(build, out);
    if (e->parsed()) return cmd_evaluate(evaluate, out, err);
    if (s->parsed()) return cmd_stats(stats_dir, stats_name, out);
    if (r->parsed()) return cmd_relabel(relabel, out);
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace kgbench::cli
