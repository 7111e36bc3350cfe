#include "kgbench/bench/question.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <map>

#include <fmt/format.h>

#include "kgbench/error.hpp"
#include "kgbench/llm/prompt.hpp"
#include "kgbench/util/random.hpp"
#include "kgbench/util/text.hpp"

namespace kgbench::bench {

std::string_view to_string(kg::Direction direction) {
  return direction == kg::Direction::HeadAsTopic ? "head-as-topic" : "tail-as-topic";
}

std::optional<kg::Direction> parse_direction(std::string_view text) {
  if (text == "head-as-topic") return kg::Direction::HeadAsTopic;
  if (text == "tail-as-topic") return kg::Direction::TailAsTopic;
  return std::nullopt;
}

kg::EntityId topic_of(const kg::Triple& t, kg::Direction d) {
  return d == kg::Direction::HeadAsTopic ? t.subject : t.object;
}

kg::EntityId answer_of(const kg::Triple& t, kg::Direction d) {
  return d == kg::Direction::HeadAsTopic ? t.object : t.subject;
}

namespace {

// Auxiliaries and modals that open a polar question.
constexpr std::array<std::string_view, 22> kYesNoOpeners = {
    "is",    "are",   "was",  "were",  "am",  "do",   "does", "did",    "can",   "could", "will",
    "would", "shall", "should", "may", "might", "must", "has",  "have", "had", "isn't", "aren't"};

std::string leading_token(std::string_view question) {
  question = util::trim(question);
  std::size_t start = 0;
  while (start < question.size() && !std::isalnum(static_cast<unsigned char>(question[start]))) ++start;
  std::string token;
  for (std::size_t i = start; i < question.size(); ++i) {
    unsigned char c = static_cast<unsigned char>(question[i]);
    if (!std::isalnum(c) && c != '\'') break;
    token.push_back(static_cast<char>(std::tolower(c)));
  }
  return token;
}

}  // namespace

std::optional<std::string> question_problem(std::string_view question, std::string_view topic,
                                            std::string_view answer) {
  if (util::trim(question).empty()) return "question is empty";
  if (!util::contains_word(question, topic)) return fmt::format("question does not mention topic '{}'", topic);
  if (util::contains_word(question, answer)) return fmt::format("question names the answer '{}'", answer);
  const std::string opener = leading_token(question);
  if (std::find(kYesNoOpeners.begin(), kYesNoOpeners.end(), opener) != kYesNoOpeners.end()) {
    return fmt::format("question opens with '{}' and reads as yes/no", opener);
  }
  return std::nullopt;
}

std::string generate_question(const kg::Triple& removed, kg::Direction direction, llm::QuestionGenerator& generator,
                              const kg::KnowledgeGraph& labels, unsigned attempt) {
  const kg::EntityId topic = topic_of(removed, direction);
  const kg::EntityId answer = answer_of(removed, direction);
  llm::QuestionContext ctx{llm::prompt_slots(removed, topic, answer, labels), direction};
  std::string text(util::trim(generator.generate(ctx, attempt)));
  if (auto problem = question_problem(text, ctx.slots.topic_entity, ctx.slots.answer_entity)) {
    throw Error(ErrorCode::ValidationFailure, *problem);
  }
  return text;
}

std::vector<kg::EntityId> complete_answers(const kg::KnowledgeGraph& complete, kg::EntityId topic,
                                           kg::PredicateId predicate, kg::Direction direction) {
  std::vector<kg::EntityId> out;
  if (direction == kg::Direction::HeadAsTopic) {
    for (const kg::Triple& t : complete.with_subject_predicate(topic, predicate)) out.push_back(t.object);
  } else {
    for (const kg::Triple& t : complete.with_object_predicate(topic, predicate)) out.push_back(t.subject);
  }
  if (out.empty()) {
    throw Error(ErrorCode::EmptyAnswerSet,
                fmt::format("no answers for topic '{}' and predicate '{}'", complete.label(topic),
                            complete.label(predicate)));
  }
  return out;  // index order is already ascending
}

void BalanceConfig::validate() const {
  if (!(tau > 0.0 && tau <= 1.0)) throw Error(ErrorCode::InvalidConfig, fmt::format("tau {} not in (0, 1]", tau));
}

std::size_t balance_cap(double tau, std::size_t n) {
  return static_cast<std::size_t>(std::floor(tau * static_cast<double>(n) + 1e-9));
}

std::vector<QuestionRecord> downsample(std::span<const QuestionRecord> questions, const BalanceConfig& config) {
  config.validate();
  const std::size_t cap = balance_cap(config.tau, questions.size());

  std::map<kg::EntityId, std::vector<std::size_t>> by_answer;
  for (std::size_t i = 0; i < questions.size(); ++i) by_answer[questions[i].hard_answer].push_back(i);

  std::vector<bool> keep(questions.size(), true);
  for (const auto& [answer, members] : by_answer) {
    if (members.size() <= cap) continue;
    for (std::size_t m : members) keep[m] = false;
    util::Rng rng(util::mix_seed(config.seed, kg::index_of(answer)));
    for (std::size_t pick : rng.sample_indices(members.size(), cap)) keep[members[pick]] = true;
  }

  std::vector<QuestionRecord> out;
  for (std::size_t i = 0; i < questions.size(); ++i) {
    if (keep[i]) out.push_back(questions[i]);
  }
  return out;
}

Splits split(std::span<const QuestionRecord> questions, const SplitRatios& ratios, std::uint64_t seed) {
  const double total = ratios.train + ratios.validation + ratios.test;
  if (ratios.train < 0 || ratios.validation < 0 || ratios.test < 0 || !(total > 0)) {
    throw Error(ErrorCode::InvalidConfig, "split ratios must be non-negative with a positive total");
  }
  std::vector<std::size_t> order(questions.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  util::Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  const double n = static_cast<double>(questions.size());
  const auto n_train = static_cast<std::size_t>(std::floor(n * ratios.train / total + 1e-9));
  const auto n_validation =
      std::min(static_cast<std::size_t>(std::floor(n * ratios.validation / total + 1e-9)), order.size() - n_train);

  Splits s;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const QuestionRecord& q = questions[order[i]];
    if (i < n_train) {
      s.train.push_back(q);
    } else if (i < n_train + n_validation) {
      s.validation.push_back(q);
    } else {
      s.test.push_back(q);
    }
  }
  return s;
}

}  // namespace kgbench::bench
