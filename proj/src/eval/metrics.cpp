#include "kgbench/eval/metrics.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <unordered_map>

#include <fmt/format.h>

#include "kgbench/error.hpp"
#include "kgbench/util/text.hpp"

namespace kgbench::eval {

std::vector<std::string> parse_predictions(std::string_view raw, bool split_on_spaces) {
  std::vector<std::string> out;
  std::size_t start = 0;
  auto flush = [&](std::size_t end) {
    std::string_view piece = util::trim(raw.substr(start, end - start));
    if (!piece.empty()) out.emplace_back(piece);
    start = end + 1;
  };
  for (std::size_t i = 0; i < raw.size(); ++i) {
    const char c = raw[i];
    if (c == ',' || c == ';' || c == '\n' || (split_on_spaces && (c == ' ' || c == '\t'))) flush(i);
  }
  flush(raw.size());
  return out;
}

std::string normalize(std::string_view text) {
  std::string s;
  s.reserve(text.size());
  for (char c : text) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));

  for (std::size_t at = s.find("<pad>"); at != std::string::npos; at = s.find("<pad>")) s.erase(at, 5);

  std::string kept;
  kept.reserve(s.size());
  for (char c : s) {
    if (!std::ispunct(static_cast<unsigned char>(c))) kept.push_back(c);
  }

  std::string out;
  std::size_t i = 0;
  while (i < kept.size()) {
    while (i < kept.size() && std::isspace(static_cast<unsigned char>(kept[i]))) ++i;
    std::size_t j = i;
    while (j < kept.size() && !std::isspace(static_cast<unsigned char>(kept[j]))) ++j;
    if (j > i) {
      std::string_view word(kept.data() + i, j - i);
      if (word != "a" && word != "an" && word != "the") {
        if (!out.empty()) out.push_back(' ');
        out.append(word);
      }
    }
    i = j;
  }
  return out;
}

AnswerSet prediction_set(std::string_view raw, bool split_on_spaces) {
  return normalized_set(parse_predictions(raw, split_on_spaces));
}

AnswerSet normalized_set(std::span<const std::string> answers) {
  AnswerSet out;
  for (const std::string& a : answers) {
    std::string n = normalize(a);
    if (!n.empty()) out.insert(std::move(n));
  }
  return out;
}

PerQuestionScore score_question(const AnswerSet& prediction, const AnswerSet& gold, const std::string& hard) {
  if (gold.empty()) throw Error(ErrorCode::EmptyInput, "gold answer set is empty");
  if (!gold.contains(hard)) throw Error(ErrorCode::HardNotInGold, fmt::format("hard answer '{}' not in gold", hard));
  PerQuestionScore s;
  s.answer_set_size = gold.size();
  s.prediction_size = prediction.size();
  std::size_t common = 0;
  for (const std::string& p : prediction) common += gold.contains(p) ? 1 : 0;
  s.hit_any = common > 0;
  s.hit_hard = prediction.contains(hard);
  if (!prediction.empty()) s.precision = static_cast<double>(common) / static_cast<double>(prediction.size());
  s.recall = static_cast<double>(common) / static_cast<double>(gold.size());
  s.f1 = 2.0 * static_cast<double>(common) / static_cast<double>(prediction.size() + gold.size());
  return s;
}

namespace {

struct Sums {
  std::size_t n = 0, precision_n = 0, hits_any = 0, hits_hard = 0;
  double precision = 0, recall = 0, f1 = 0;

  void add(const PerQuestionScore& s, EmptyPrecision empty) {
    ++n;
    hits_any += s.hit_any ? 1 : 0;
    hits_hard += s.hit_hard ? 1 : 0;
    if (s.prediction_size > 0 || empty == EmptyPrecision::Zero) {
      ++precision_n;
      precision += s.precision;
    }
    recall += s.recall;
    f1 += s.f1;
  }

  Metrics finish() const {
    Metrics m;
    const auto d = static_cast<double>(n);
    m.questions = n;
    m.precision_questions = precision_n;
    m.hits_any = static_cast<double>(hits_any) / d;
    m.hits_hard = static_cast<double>(hits_hard) / d;
    m.precision = precision_n ? precision / static_cast<double>(precision_n) : 0.0;
    m.recall = recall / d;
    m.f1 = f1 / d;
    if (hits_any > 0) m.hhr = static_cast<double>(hits_hard) / static_cast<double>(hits_any);
    return m;
  }
};

std::string unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      const char n = s[i + 1];
      if (n == 'n' || n == 't' || n == '\\') {
        out.push_back(n == 'n' ? '\n' : n == 't' ? '\t' : '\\');
        ++i;
        continue;
      }
    }
    out.push_back(s[i]);
  }
  return out;
}

nlohmann::ordered_json metrics_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["questions"] = m.questions;
  j["hits_any"] = m.hits_any;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["hits_hard"] = m.hits_hard;
  j["hhr"] = m.hhr ? nlohmann::ordered_json(*m.hhr) : nlohmann::ordered_json(nullptr);
  j["precision_questions"] = m.precision_questions;
  return j;
}

std::string hhr_text(const std::optional<double>& hhr) { return hhr ? fmt::format("{:.4f}", *hhr) : "undefined"; }

}  // namespace

MetricsReport aggregate(std::span<const ScoredQuestion> scores, EmptyPrecision empty) {
  if (scores.empty()) throw Error(ErrorCode::EmptyInput, "no scored questions");
  Sums all;
  std::map<classify::RuleType, Sums> by_type;
  for (const ScoredQuestion& q : scores) {
    all.add(q.score, empty);
    by_type[classify::summary_bucket(q.rule_type)].add(q.score, empty);
  }
  MetricsReport r;
  r.overall = all.finish();
  for (const auto& [type, sums] : by_type) r.per_rule_type[type] = sums.finish();
  return r;
}

std::vector<RawPrediction> read_predictions(std::istream& in) {
  std::vector<RawPrediction> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (util::trim(line).empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(ErrorCode::MalformedLine, fmt::format("predictions line {}: expected id<TAB>text", line_no));
    }
    out.push_back({std::string(util::trim(std::string_view(line).substr(0, tab))), unescape(line.substr(tab + 1))});
  }
  return out;
}

std::vector<RawPrediction> read_predictions_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, fmt::format("cannot open '{}'", path));
  return read_predictions(in);
}

std::vector<EvalQuestion> eval_questions(std::span<const bench::QuestionRecord> records,
                                         const kg::KnowledgeGraph& labels) {
  std::vector<EvalQuestion> out;
  out.reserve(records.size());
  for (const bench::QuestionRecord& q : records) {
    EvalQuestion e{q.id, {}, labels.label(q.hard_answer), q.rule_type};
    for (kg::EntityId a : q.answers) e.answers.push_back(labels.label(a));
    out.push_back(std::move(e));
  }
  return out;
}

RunReport evaluate_run(std::span<const EvalQuestion> questions, std::span<const RawPrediction> predictions,
                       const EvalOptions& options) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < questions.size(); ++i) index.emplace(questions[i].id, i);

  std::vector<const RawPrediction*> by_question(questions.size(), nullptr);
  for (const RawPrediction& p : predictions) {
    auto it = index.find(p.question_id);
    if (it == index.end()) throw Error(ErrorCode::UnknownQuestionId, fmt::format("unknown question '{}'", p.question_id));
    if (by_question[it->second]) {
      throw Error(ErrorCode::DuplicatePrediction, fmt::format("question '{}' predicted twice", p.question_id));
    }
    by_question[it->second] = &p;
  }

  RunReport report;
  report.options = options;
  report.predictions = predictions.size();
  std::vector<ScoredQuestion> scored;
  scored.reserve(questions.size());
  for (std::size_t i = 0; i < questions.size(); ++i) {
    const EvalQuestion& q = questions[i];
    const AnswerSet gold = normalized_set(q.answers);
    AnswerSet predicted;
    if (by_question[i]) {
      predicted = prediction_set(by_question[i]->raw_text, options.split_on_spaces);
    } else {
      ++report.missing_predictions;
    }
    scored.push_back({q.id, q.rule_type, score_question(predicted, gold, normalize(q.hard_answer))});
  }
  report.metrics = aggregate(scored, options.empty_precision);
  return report;
}

nlohmann::ordered_json to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["label_scheme"] = r.options.label_scheme;
  j["kg_setting"] = r.options.kg_setting;
  j["conventions"] = {
      {"delimiters", r.options.split_on_spaces ? "comma, semicolon, newline, space"
                                               : "comma, semicolon, newline (spaces kept so multi-word labels survive)"},
      {"matching", "exact after normalization"},
      {"empty_prediction_precision", r.options.empty_precision == EmptyPrecision::Zero ? "zero" : "skip"},
      {"missing_prediction", "scores zero"},
      {"hhr_when_no_hits", "undefined"}};
  j["predictions"] = r.predictions;
  j["missing_predictions"] = r.missing_predictions;
  j["overall"] = metrics_json(r.metrics.overall);
  nlohmann::ordered_json types = nlohmann::ordered_json::object();
  for (const auto& [type, m] : r.metrics.per_rule_type) types[std::string(classify::to_string(type))] = metrics_json(m);
  j["per_rule_type"] = std::move(types);
  return j;
}

std::string format_summary(const RunReport& r, bool breakdown) {
  const Metrics& m = r.metrics.overall;
  std::string out;
  auto row = [&](std::string_view name, const std::string& value) { out += fmt::format("{:<20}{}\n", name, value); };
  row("label_scheme", r.options.label_scheme);
  row("kg_setting", r.options.kg_setting);
  row("questions", std::to_string(m.questions));
  row("missing", std::to_string(r.missing_predictions));
  row("Hits@Any", fmt::format("{:.4f}", m.hits_any));
  row("Precision", fmt::format("{:.4f}", m.precision));
  row("Recall", fmt::format("{:.4f}", m.recall));
  row("F1", fmt::format("{:.4f}", m.f1));
  row("Hits@Hard", fmt::format("{:.4f}", m.hits_hard));
  row("HHR", hhr_text(m.hhr));
  if (!breakdown) return out;
  for (const auto& [type, t] : r.metrics.per_rule_type) {
    row(fmt::format("HHR[{}]", classify::to_string(type)), fmt::format("{} ({} questions)", hhr_text(t.hhr), t.questions));
  }
  return out;
}

}  // namespace kgbench::eval
