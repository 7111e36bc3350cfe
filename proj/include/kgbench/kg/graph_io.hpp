#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kgbench/kg/graph.hpp"

namespace kgbench::kg {

enum class GraphFormat { Tsv };

// Reads `subject<TAB>predicate<TAB>object` lines. Blank lines are skipped and
// a trailing '\r' is tolerated; any other line without exactly three
// non-empty fields raises MalformedLine. Zero triples raises EmptyGraph.
KnowledgeGraph load_graph(std::istream& in, GraphFormat format = GraphFormat::Tsv);
KnowledgeGraph load_graph_file(const std::filesystem::path& path);

// Writes every triple in ascending id order using the graph's labels.
void write_graph(std::ostream& out, const KnowledgeGraph& graph);
void write_graph_file(const std::filesystem::path& path, const KnowledgeGraph& graph);

// Two-column TAB file; used for text names (raw id -> name) and for label
// mapping exports (old label -> new label).
using LabelMap = std::unordered_map<std::string, std::string>;
LabelMap read_label_map(std::istream& in);
LabelMap read_label_map_file(const std::filesystem::path& path);
void write_label_pairs(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& pairs);

}  // namespace kgbench::kg
