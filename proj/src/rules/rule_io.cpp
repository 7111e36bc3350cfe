#include "kgbench/rules/rule_io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>

#include <fmt/format.h>

#include "kgbench/error.hpp"
#include "kgbench/rules/canonical.hpp"
#include "kgbench/util/text.hpp"

namespace kgbench::rules {

namespace {

std::string variable_name(std::size_t n) {
  if (n < 26) return std::string("?") + static_cast<char>('a' + n);
  return fmt::format("?v{}", n);
}

constexpr std::string_view kAnd = " & ";
constexpr std::string_view kImplies = " => ";

}  // namespace

std::string format_rule(const Rule& rule, const kg::KnowledgeGraph& graph) {
  std::unordered_map<std::uint32_t, std::size_t> names;
  auto term = [&](Term t) -> std::string {
    if (t.is_constant()) return graph.label(t.entity());
    auto [it, inserted] = names.emplace(t.variable_index(), names.size());
    return variable_name(it->second);
  };
  auto atom = [&](const Atom& a) {
    std::string s = graph.label(a.predicate);
    s += '(';
    s += term(a.subject);
    s += ',';
    s += term(a.object);
    s += ')';
    return s;
  };
  std::string out;
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    if (i > 0) out += kAnd;
    out += atom(rule.body[i]);
  }
  out += kImplies;
  out += atom(rule.head);
  return out;
}

Rule parse_rule(std::string_view text, const kg::KnowledgeGraph& graph) {
  text = util::trim(text);
  const std::size_t arrow = text.find("=>");
  if (arrow == std::string_view::npos) throw Error(ErrorCode::InvalidRule, fmt::format("missing '=>' in '{}'", text));

  std::unordered_map<std::string, std::uint32_t> vars;
  auto term = [&](std::string_view t) -> Term {
    t = util::trim(t);
    if (t.empty()) throw Error(ErrorCode::InvalidRule, fmt::format("empty argument in '{}'", text));
    if (t.front() == '?') {
      auto [it, inserted] = vars.emplace(std::string(t), static_cast<std::uint32_t>(vars.size()));
      return Term::variable(it->second);
    }
    return Term::constant(graph.entity(t));
  };
  auto atom = [&](std::string_view s) -> Atom {
    s = util::trim(s);
    const std::size_t open = s.rfind('(');
    const std::size_t comma = s.rfind(',');
    if (open == std::string_view::npos || s.back() != ')' || comma == std::string_view::npos || comma < open) {
      throw Error(ErrorCode::InvalidRule, fmt::format("malformed atom '{}'", s));
    }
    Atom a;
    a.predicate = graph.predicate(s.substr(0, open));
    a.subject = term(s.substr(open + 1, comma - open - 1));
    a.object = term(s.substr(comma + 1, s.size() - comma - 2));
    return a;
  };

  Rule rule;
  std::string_view body = util::trim(text.substr(0, arrow));
  while (!body.empty()) {
    const std::size_t amp = body.find(" & ");
    rule.body.push_back(atom(body.substr(0, amp)));
    if (amp == std::string_view::npos) break;
    body = body.substr(amp + kAnd.size());
  }
  rule.head = atom(text.substr(arrow + 2));
  return canonical(rule);
}

void write_rules(std::ostream& out, const std::vector<Rule>& rules, const kg::KnowledgeGraph& graph,
                 const std::vector<std::string>& header) {
  for (const std::string& line : header) out << "# " << line << '\n';
  for (const Rule& r : rules) {
    const Measures m = r.measures.value_or(Measures{});
    out << fmt::format("{}\t{}\t{:.6f}\t{:.6f}\t{:.6f}\n", format_rule(r, graph), m.support, m.head_coverage(),
                       m.confidence(), m.pca_confidence());
  }
}

void write_rules_file(const std::filesystem::path& path, const std::vector<Rule>& rules,
                      const kg::KnowledgeGraph& graph, const std::vector<std::string>& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, fmt::format("cannot write {}", path.string()));
  write_rules(out, rules, graph, header);
  if (!out) throw Error(ErrorCode::Io, fmt::format("write failed for {}", path.string()));
}

std::vector<Rule> read_rules(std::istream& in, const kg::KnowledgeGraph& graph) {
  std::vector<Rule> rules;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = util::trim(line);
    if (view.empty() || view.front() == '#') continue;
    rules.push_back(parse_rule(view.substr(0, view.find('\t')), graph));
  }
  return rules;
}

std::vector<Rule> read_rules_file(const std::filesystem::path& path, const kg::KnowledgeGraph& graph) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot read {}", path.string()));
  return read_rules(in, graph);
}

}  // namespace kgbench::rules
