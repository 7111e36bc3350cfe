#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kgbench/kg/graph.hpp"
#include "kgbench/kg/graph_io.hpp"

namespace kgbench::kg {

// How entities are presented to the system under test.
//   PrivateId - seeded random bijection onto opaque indices "0".."n-1"
//   EntityId  - the raw dataset identifier (the labels as loaded)
//   TextLabel - a human-readable name looked up in a names table
struct LabelScheme {
  enum class Variant { PrivateId, EntityId, TextLabel };
  Variant variant = Variant::PrivateId;
  std::uint64_t seed = 0;
};

std::string_view to_string(LabelScheme::Variant variant);
std::optional<LabelScheme::Variant> parse_label_variant(std::string_view text);

struct RelabelResult {
  KnowledgeGraph graph;
  // (old label, new label), one entry per entity in id order.
  std::vector<std::pair<std::string, std::string>> mapping;
};

// Internal ids are kept, so the result is isomorphic to the input triple for
// triple. TextLabel needs `names` to cover every entity (MissingLabel
// otherwise); entities sharing a name are disambiguated as "name (raw-id)".
RelabelResult relabel(const KnowledgeGraph& graph, const LabelScheme& scheme, const LabelMap* names = nullptr);

}  // namespace kgbench::kg
