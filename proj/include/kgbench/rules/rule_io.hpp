#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "kgbench/kg/graph.hpp"
#include "kgbench/rules/rule.hpp"

namespace kgbench::rules {

// `B1 & B2 => H` with atoms as `pred(?a,?b)`. Variables are lettered in order
// of first appearance, body first; constants print as entity labels.
std::string format_rule(const Rule& rule, const kg::KnowledgeGraph& graph);

// Parses format_rule output. Throws InvalidRule on syntax errors and
// UnknownLabel for predicates or constants missing from the graph. The result
// is canonical and carries no measures.
Rule parse_rule(std::string_view text, const kg::KnowledgeGraph& graph);

// One line per rule: rule TAB support TAB hc TAB conf TAB pca, preceded by
// `# ` header lines. Rules without measures print zeros.
void write_rules(std::ostream& out, const std::vector<Rule>& rules, const kg::KnowledgeGraph& graph,
                 const std::vector<std::string>& header = {});
void write_rules_file(const std::filesystem::path& path, const std::vector<Rule>& rules,
                      const kg::KnowledgeGraph& graph, const std::vector<std::string>& header = {});

// Reads a rule file, skipping `#` lines and blank lines; only the rule column
// is interpreted.
std::vector<Rule> read_rules(std::istream& in, const kg::KnowledgeGraph& graph);
std::vector<Rule> read_rules_file(const std::filesystem::path& path, const kg::KnowledgeGraph& graph);

}  // namespace kgbench::rules
