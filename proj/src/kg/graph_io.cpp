#include "kgbench/kg/graph_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "kgbench/error.hpp"
#include "kgbench/util/text.hpp"

namespace kgbench::kg {

namespace {

std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace

KnowledgeGraph load_graph(std::istream& in, GraphFormat /*format*/) {
  GraphBuilder builder;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = strip_cr(line);
    if (view.empty()) continue;
    auto fields = util::split(view, '\t');
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      throw Error(ErrorCode::MalformedLine,
                  fmt::format("line {}: expected 3 tab-separated fields, got {}", line_number, fields.size()));
    }
    builder.add(fields[0], fields[1], fields[2]);
  }
  if (builder.pending() == 0) throw Error(ErrorCode::EmptyGraph, "input contains no triples");
  return std::move(builder).build();
}

KnowledgeGraph load_graph_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
  return load_graph(in);
}

void write_graph(std::ostream& out, const KnowledgeGraph& graph) {
  for (const Triple& t : graph.triples()) {
    out << graph.label(t.subject) << '\t' << graph.label(t.predicate) << '\t' << graph.label(t.object) << '\n';
  }
}

void write_graph_file(const std::filesystem::path& path, const KnowledgeGraph& graph) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write '{}'", path.string()));
  write_graph(out, graph);
}

LabelMap read_label_map(std::istream& in) {
  LabelMap map;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    std::string_view view = strip_cr(line);
    if (view.empty()) continue;
    auto tab = view.find('\t');
    if (tab == std::string_view::npos) {
      throw Error(ErrorCode::MalformedLine, fmt::format("line {}: expected 2 tab-separated fields", line_number));
    }
    map.emplace(std::string(view.substr(0, tab)), std::string(view.substr(tab + 1)));
  }
  return map;
}

LabelMap read_label_map_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path.string()));
  return read_label_map(in);
}

void write_label_pairs(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& pairs) {
  for (const auto& [from, to] : pairs) out << from << '\t' << to << '\n';
}

}  // namespace kgbench::kg
