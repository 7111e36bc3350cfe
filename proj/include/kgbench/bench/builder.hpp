#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kgbench/bench/plan.hpp"
#include "kgbench/bench/question.hpp"
#include "kgbench/kg/graph_io.hpp"
#include "kgbench/kg/relabel.hpp"
#include "kgbench/llm/generator.hpp"
#include "kgbench/rules/rule.hpp"

namespace kgbench::bench {

struct BuildConfig {
  std::string preset = "custom";
  std::uint64_t seed = 0;  // every other seed is derived from it
  std::size_t per_rule_limit = 30;
  double tau = 0.05;
  SplitRatios ratios;
  kg::LabelScheme::Variant label_variant = kg::LabelScheme::Variant::PrivateId;
  const kg::LabelMap* names = nullptr;  // raw label -> text name, for TextLabel
  std::size_t workers = 1;              // concurrent question generations
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();  // copied into the manifest

  void validate() const;
};

struct DatasetBundle {
  // Both graphs carry the labels of the active scheme and share entity ids.
  kg::KnowledgeGraph complete;
  kg::KnowledgeGraph incomplete;
  Splits splits;
  std::vector<std::pair<std::string, std::string>> label_mapping;  // original -> active
  nlohmann::ordered_json manifest;
};

// plan_removals -> remove -> relabel -> generate_question (seeded coin for the
// direction; one regeneration, then the template; records that still fail
// are dropped and counted) -> complete_answers -> downsample -> split.
DatasetBundle build(const kg::KnowledgeGraph& graph, std::span<const rules::Rule> rules, const BuildConfig& config,
                    llm::QuestionGenerator& generator);

// Files written into `dir` (created if needed).
inline constexpr std::string_view kCompleteFile = "complete.tsv";
inline constexpr std::string_view kIncompleteFile = "incomplete.tsv";
inline constexpr std::string_view kTrainFile = "train.jsonl";
inline constexpr std::string_view kValidationFile = "validation.jsonl";
inline constexpr std::string_view kTestFile = "test.jsonl";
inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kLabelMappingFile = "label_mapping.tsv";
std::vector<std::string_view> bundle_files();

void write_bundle(const DatasetBundle& bundle, const std::filesystem::path& dir);
// CorruptBundle on missing files, unparsable records or labels absent from
// the complete graph.
DatasetBundle load_bundle(const std::filesystem::path& dir);

nlohmann::ordered_json to_json(const QuestionRecord& record, const kg::KnowledgeGraph& labels);
QuestionRecord question_from_json(const nlohmann::json& j, const kg::KnowledgeGraph& labels);

}  // namespace kgbench::bench
