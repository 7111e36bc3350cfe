#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "kgbench/bench/question.hpp"
#include "kgbench/classify/classify.hpp"
#include "kgbench/kg/graph.hpp"

namespace kgbench::eval {

// Splits raw model output on commas, semicolons and newlines (and on spaces
// when asked), trims each fragment and drops empty ones.
std::vector<std::string> parse_predictions(std::string_view raw, bool split_on_spaces = false);

// Lowercase (ASCII), delete every "<pad>", delete ASCII punctuation, drop the
// standalone words a/an/the, collapse whitespace runs to one space and trim.
std::string normalize(std::string_view text);

using AnswerSet = std::set<std::string>;

// Normalized, de-duplicated fragments; fragments that normalize to "" are
// dropped.
AnswerSet prediction_set(std::string_view raw, bool split_on_spaces = false);
AnswerSet normalized_set(std::span<const std::string> answers);

struct PerQuestionScore {
  bool hit_any = false;
  bool hit_hard = false;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  std::size_t answer_set_size = 0;
  std::size_t prediction_size = 0;
};

// `gold` and `hard` must already be normalized. An empty prediction scores
// zero everywhere. HardNotInGold if hard is not in gold; EmptyInput if gold
// is empty.
PerQuestionScore score_question(const AnswerSet& prediction, const AnswerSet& gold, const std::string& hard);

enum class EmptyPrecision {
  Zero,  // an empty prediction contributes precision 0
  Skip,  // an empty prediction is left out of the precision mean
};

struct Metrics {
  std::size_t questions = 0;
  std::size_t precision_questions = 0;  // questions in the precision mean
  double hits_any = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  double hits_hard = 0;
  std::optional<double> hhr;  // nullopt when hits_any is 0
};

struct ScoredQuestion {
  std::string id;
  classify::RuleType rule_type = classify::RuleType::Other;
  PerQuestionScore score;
};

struct MetricsReport {
  Metrics overall;
  // Keyed by the summary bucket of each question's rule type.
  std::map<classify::RuleType, Metrics> per_rule_type;
};

// Unweighted means over questions; HHR = hits_hard / hits_any.
// EmptyInput when there are no scores.
MetricsReport aggregate(std::span<const ScoredQuestion> scores, EmptyPrecision empty = EmptyPrecision::Zero);

struct RawPrediction {
  std::string question_id;
  std::string raw_text;
};

// `question_id<TAB>raw_text` lines; in raw_text "\n", "\t" and "\\" are
// unescaped. Blank lines are skipped; a line without a TAB raises
// MalformedLine.
std::vector<RawPrediction> read_predictions(std::istream& in);
std::vector<RawPrediction> read_predictions_file(const std::string& path);

// Gold answers as rendered for the system under test.
struct EvalQuestion {
  std::string id;
  std::vector<std::string> answers;
  std::string hard_answer;
  classify::RuleType rule_type = classify::RuleType::Other;
};

std::vector<EvalQuestion> eval_questions(std::span<const bench::QuestionRecord> records,
                                         const kg::KnowledgeGraph& labels);

struct EvalOptions {
  bool split_on_spaces = false;
  EmptyPrecision empty_precision = EmptyPrecision::Zero;
  std::string label_scheme = "unspecified";  // recorded in the report
  std::string kg_setting = "unspecified";    // e.g. complete / incomplete
};

struct RunReport {
  EvalOptions options;
  MetricsReport metrics;
  std::size_t predictions = 0;
  std::size_t missing_predictions = 0;
};

// parse -> normalize -> score -> aggregate. Questions without a prediction
// row score zero. UnknownQuestionId, DuplicatePrediction.
RunReport evaluate_run(std::span<const EvalQuestion> questions, std::span<const RawPrediction> predictions,
                       const EvalOptions& options = {});

nlohmann::ordered_json to_json(const RunReport& report);
// Two columns, one metric per line; with `breakdown`, then one HHR line per
// rule type.
std::string format_summary(const RunReport& report, bool breakdown = false);

}  // namespace kgbench::eval
