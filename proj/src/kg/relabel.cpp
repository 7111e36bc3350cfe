#include "kgbench/kg/relabel.hpp"

#include <numeric>
#include <unordered_map>

#include <fmt/format.h>

#include "kgbench/error.hpp"
#include "kgbench/util/random.hpp"

namespace kgbench::kg {

std::string_view to_string(LabelScheme::Variant variant) {
  switch (variant) {
    case LabelScheme::Variant::PrivateId: return "private-id";
    case LabelScheme::Variant::EntityId: return "entity-id";
    case LabelScheme::Variant::TextLabel: return "text-label";
  }
  return "unknown";
}

std::optional<LabelScheme::Variant> parse_label_variant(std::string_view text) {
  if (text == "private-id" || text == "private") return LabelScheme::Variant::PrivateId;
  if (text == "entity-id" || text == "entity") return LabelScheme::Variant::EntityId;
  if (text == "text-label" || text == "text") return LabelScheme::Variant::TextLabel;
  return std::nullopt;
}

namespace {

std::vector<std::string> text_labels(const KnowledgeGraph& graph, const LabelMap* names) {
  const std::size_t n = graph.entity_count();
  std::vector<std::string> out(n);
  std::unordered_map<std::string, std::size_t> uses;
  for (std::size_t i = 0; i < n; ++i) {
    const std::string& raw = graph.label(EntityId{static_cast<std::uint32_t>(i)});
    auto it = names ? names->find(raw) : LabelMap::const_iterator{};
    if (!names || it == names->end() || it->second.empty()) {
      throw Error(ErrorCode::MissingLabel, fmt::format("entity '{}' has no text label", raw));
    }
    out[i] = it->second;
    ++uses[out[i]];
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (uses[out[i]] > 1) out[i] = fmt::format("{} ({})", out[i], graph.label(EntityId{static_cast<std::uint32_t>(i)}));
  }
  return out;
}

}  // namespace

RelabelResult relabel(const KnowledgeGraph& graph, const LabelScheme& scheme, const LabelMap* names) {
  const std::size_t n = graph.entity_count();
  std::vector<std::string> labels;
  labels.reserve(n);
  switch (scheme.variant) {
    case LabelScheme::Variant::EntityId:
      for (std::size_t i = 0; i < n; ++i) labels.push_back(graph.label(EntityId{static_cast<std::uint32_t>(i)}));
      break;
    case LabelScheme::Variant::PrivateId: {
      std::vector<std::uint32_t> permutation(n);
      std::iota(permutation.begin(), permutation.end(), 0U);
      util::Rng rng(scheme.seed);
      rng.shuffle(std::span<std::uint32_t>(permutation));
      for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(permutation[i]));
      break;
    }
    case LabelScheme::Variant::TextLabel:
      labels = text_labels(graph, names);
      break;
  }

  auto symbols = std::make_shared<SymbolTable>();
  RelabelResult result{graph, {}};
  result.mapping.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (symbols->intern(labels[i]) != i) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("relabelling produced duplicate label '{}'", labels[i]));
    }
    result.mapping.emplace_back(graph.label(EntityId{static_cast<std::uint32_t>(i)}), labels[i]);
  }
  result.graph = graph.with_entity_symbols(std::move(symbols));
  return result;
}

}  // namespace kgbench::kg
