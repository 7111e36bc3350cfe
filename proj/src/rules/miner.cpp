#include "kgbench/rules/miner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "kgbench/error.hpp"
#include "kgbench/rules/canonical.hpp"
#include "kgbench/rules/matcher.hpp"
#include "kgbench/rules/measures.hpp"

namespace kgbench::rules {

void MinerConfig::validate() const {
  auto check_ratio = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("{} must be in [0, 1], got {}", name, v));
    }
  };
  check_ratio(min_confidence, "min_confidence");
  check_ratio(min_head_coverage, "min_head_coverage");
  check_ratio(min_pca_confidence, "min_pca_confidence");
  if (max_length < 2) throw Error(ErrorCode::InvalidConfig, fmt::format("max_length must be >= 2, got {}", max_length));
  if (max_length > 30) throw Error(ErrorCode::InvalidConfig, fmt::format("max_length {} is too large", max_length));
}

std::optional<MinerConfig> MinerConfig::preset(std::string_view name) {
  MinerConfig c;
  if (name == "family") {
    c.max_length = 3;
    return c;
  }
  if (name == "fb15k237") {
    c.max_length = 4;
    return c;
  }
  return std::nullopt;
}

namespace {

enum class SlotKind : std::uint8_t { Out, In, Closing, ConstOut, ConstIn };

// Where a new atom attaches: Out is p(a, fresh), In is p(fresh, a),
// Closing is p(a, b), ConstOut is p(a, c), ConstIn is p(c, a).
struct Slot {
  SlotKind kind;
  std::uint32_t a;
  std::uint32_t b;
};

std::vector<std::uint32_t> occurrences(const Rule& rule, std::uint32_t variables) {
  std::vector<std::uint32_t> occ(variables, 0);
  auto visit = [&](const Atom& atom) {
    if (atom.subject.is_variable()) ++occ[atom.subject.variable_index()];
    if (atom.object.is_variable() && atom.object != atom.subject) ++occ[atom.object.variable_index()];
  };
  visit(rule.head);
  for (const Atom& atom : rule.body) visit(atom);
  return occ;
}

// With prune set, slots whose child would keep more open variables than the
// remaining atoms could close are skipped: such children never lead to a
// closed rule within max_length.
std::vector<Slot> plan_slots(const Rule& rule, const MinerConfig& config, bool prune) {
  std::vector<Slot> slots;
  if (rule.length() >= config.max_length) return slots;
  const std::uint32_t vars = rule.variable_count();
  const auto occ = occurrences(rule, vars);
  const std::size_t open = static_cast<std::size_t>(std::count(occ.begin(), occ.end(), 1U));
  const std::size_t budget = 2 * (config.max_length - rule.length() - 1);
  auto fits = [&](std::size_t open_after) { return !prune || open_after <= budget; };
  auto was_open = [&](std::uint32_t v) -> std::size_t { return occ[v] == 1 ? 1 : 0; };

  for (std::uint32_t a = 0; a < vars; ++a) {
    if (occ[a] == 0) continue;
    if (vars < kMaxVariables && fits(open - was_open(a) + 1)) {
      slots.push_back({SlotKind::Out, a, 0});
      slots.push_back({SlotKind::In, a, 0});
    }
    if (config.allow_instantiated_atoms && fits(open - was_open(a))) {
      slots.push_back({SlotKind::ConstOut, a, 0});
      slots.push_back({SlotKind::ConstIn, a, 0});
    }
    for (std::uint32_t b = 0; b < vars; ++b) {
      if (b == a || occ[b] == 0) continue;
      if (fits(open - was_open(a) - was_open(b))) slots.push_back({SlotKind::Closing, a, b});
    }
  }
  return slots;
}

Atom make_atom(const Slot& slot, kg::PredicateId p, std::uint32_t fresh, kg::EntityId constant) {
  switch (slot.kind) {
    case SlotKind::Out: return {p, Term::variable(slot.a), Term::variable(fresh)};
    case SlotKind::In: return {p, Term::variable(fresh), Term::variable(slot.a)};
    case SlotKind::Closing: return {p, Term::variable(slot.a), Term::variable(slot.b)};
    case SlotKind::ConstOut: return {p, Term::variable(slot.a), Term::constant(constant)};
    case SlotKind::ConstIn: return {p, Term::constant(constant), Term::variable(slot.a)};
  }
  return {};
}

// Appends atom to rule unless it repeats the head or a body atom.
std::optional<Rule> extend(const Rule& rule, const Atom& atom) {
  if (atom == rule.head) return std::nullopt;
  if (std::find(rule.body.begin(), rule.body.end(), atom) != rule.body.end()) return std::nullopt;
  Rule child{rule.body, rule.head, std::nullopt};
  child.body.push_back(atom);
  return canonical(child);
}

std::uint64_t pack(std::uint32_t hi, std::uint32_t lo) { return (static_cast<std::uint64_t>(hi) << 32) | lo; }

bool meets(std::uint64_t num, std::uint64_t den, double threshold) {
  if (den == 0) return false;
  return static_cast<double>(num) / static_cast<double>(den) >= threshold;
}

// Largest denominator d with support / d >= threshold.
std::uint64_t denominator_cap(std::uint64_t support, double threshold) {
  if (threshold <= 0.0) return UINT64_MAX;
  if (support == 0) return 0;
  const double estimate = std::floor(static_cast<double>(support) / threshold);
  std::uint64_t d = estimate >= 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(estimate);
  while (d > 0 && !meets(support, d, threshold)) --d;
  while (d < UINT64_MAX && meets(support, d + 1, threshold)) ++d;
  return d;
}

// Support of every refinement of a rule at once. For each head fact the body
// groundings are projected onto the variables the slots attach to; each
// distinct projected value marks the predicates (or predicate/constant
// pairs) found around it, at most once per head fact.
class Projector {
 public:
  Projector(const kg::KnowledgeGraph& graph, const MinerConfig& config) : graph_(graph), config_(config) {}

  std::vector<Rule> children(const Rule& rule, std::uint64_t head_facts) {
    std::vector<Rule> out;
    const auto slots = plan_slots(rule, config_, true);
    if (slots.empty()) return out;

    const std::size_t preds = graph_.predicate_count();
    const std::uint32_t vars = rule.variable_count();
    const std::uint32_t xs = rule.head.subject.variable_index();
    const std::uint32_t ys = rule.head.object.variable_index();

    std::vector<bool> wanted(vars, false);
    std::vector<std::size_t> closing_slots;
    std::vector<std::size_t> const_slots;
    for (std::size_t i = 0; i < slots.size(); ++i) {
      wanted[slots[i].a] = true;
      if (slots[i].kind == SlotKind::Closing) {
        wanted[slots[i].b] = true;
        closing_slots.push_back(i);
      } else if (slots[i].kind == SlotKind::ConstOut || slots[i].kind == SlotKind::ConstIn) {
        const_slots.push_back(i);
      }
    }
    bool need_enumeration = false;
    for (std::uint32_t v = 0; v < vars; ++v) need_enumeration |= wanted[v] && v != xs && v != ys;

    std::vector<std::uint32_t> stamps(slots.size() * preds, 0);
    std::vector<std::uint32_t> counts(slots.size() * preds, 0);
    std::vector<std::vector<std::uint32_t>> values(vars);
    std::vector<std::vector<std::uint64_t>> pairs(slots.size());
    std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> const_counts(slots.size());
    std::unordered_set<std::uint64_t> const_seen;

    auto collect = [&](const Binding& full) {
      for (std::uint32_t v = 0; v < vars; ++v) {
        if (wanted[v]) values[v].push_back(kg::index_of(full[v]));
      }
      for (std::size_t i : closing_slots) {
        pairs[i].push_back(pack(kg::index_of(full[slots[i].a]), kg::index_of(full[slots[i].b])));
      }
      return true;
    };

    BodyMatcher matcher(graph_, rule.body);
    Binding b;
    std::uint32_t epoch = 0;
    for (const kg::Triple& fact : graph_.with_predicate(rule.head.predicate)) {
      ++epoch;
      for (auto& v : values) v.clear();
      for (std::size_t i : closing_slots) pairs[i].clear();
      b.bind(xs, fact.subject);
      b.bind(ys, fact.object);
      if (need_enumeration) {
        matcher.for_each(b, collect);
      } else if (matcher.exists(b)) {
        collect(b);
      }
      if (values[slots.front().a].empty()) continue;
      for (auto& v : values) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
      }
      for (std::size_t i : closing_slots) {
        std::sort(pairs[i].begin(), pairs[i].end());
        pairs[i].erase(std::unique(pairs[i].begin(), pairs[i].end()), pairs[i].end());
      }

      for (std::size_t i = 0; i < slots.size(); ++i) {
        auto mark = [&](kg::PredicateId p) {
          const std::size_t cell = i * preds + kg::index_of(p);
          if (stamps[cell] != epoch) {
            stamps[cell] = epoch;
            ++counts[cell];
          }
        };
        const Slot& s = slots[i];
        switch (s.kind) {
          case SlotKind::Out:
            for (std::uint32_t e : values[s.a]) {
              for (kg::PredicateId p : graph_.out_predicates(kg::EntityId{e})) mark(p);
            }
            break;
          case SlotKind::In:
            for (std::uint32_t e : values[s.a]) {
              for (kg::PredicateId p : graph_.in_predicates(kg::EntityId{e})) mark(p);
            }
            break;
          case SlotKind::Closing:
            for (std::uint64_t pr : pairs[i]) {
              auto range = graph_.with_subject_object(kg::EntityId{static_cast<std::uint32_t>(pr >> 32)},
                                                      kg::EntityId{static_cast<std::uint32_t>(pr)});
              for (const kg::Triple& t : range) mark(t.predicate);
            }
            break;
          case SlotKind::ConstOut:
          case SlotKind::ConstIn: {
            const_seen.clear();
            const bool out = s.kind == SlotKind::ConstOut;
            for (std::uint32_t e : values[s.a]) {
              auto range = out ? graph_.with_subject(kg::EntityId{e}) : graph_.with_object(kg::EntityId{e});
              for (const kg::Triple& t : range) {
                const std::uint64_t key = pack(kg::index_of(t.predicate), kg::index_of(out ? t.object : t.subject));
                if (const_seen.insert(key).second) ++const_counts[i][key];
              }
            }
            break;
          }
        }
      }
    }

    const std::uint32_t fresh = vars;
    auto admit = [&](const Slot& s, kg::PredicateId p, kg::EntityId c, std::uint32_t count) {
      if (count == 0 || !meets(count, head_facts, config_.min_head_coverage)) return;
      auto child = extend(rule, make_atom(s, p, fresh, c));
      if (!child) return;
      Measures m;
      m.support = count;
      m.head_facts = head_facts;
      child->measures = m;
      out.push_back(std::move(*child));
    };
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const Slot& s = slots[i];
      if (s.kind == SlotKind::ConstOut || s.kind == SlotKind::ConstIn) {
        std::vector<std::pair<std::uint64_t, std::uint32_t>> sorted(const_counts[i].begin(), const_counts[i].end());
        std::sort(sorted.begin(), sorted.end());
        for (const auto& [key, count] : sorted) {
          admit(s, kg::PredicateId{static_cast<std::uint32_t>(key >> 32)},
                kg::EntityId{static_cast<std::uint32_t>(key)}, count);
        }
        continue;
      }
      for (std::size_t p = 0; p < preds; ++p) {
        admit(s, kg::PredicateId{static_cast<std::uint32_t>(p)}, kg::EntityId{0}, counts[i * preds + p]);
      }
    }
    return out;
  }

 private:
  const kg::KnowledgeGraph& graph_;
  const MinerConfig& config_;
};

struct Outcome {
  bool qualifies = false;
  Measures measures;
  std::vector<Rule> children;
};

Outcome evaluate(const Rule& rule, const MinerConfig& config, BindingCounter& counter, Projector& projector) {
  Outcome out;
  const Measures partial = *rule.measures;
  out.measures = partial;
  const bool closed = structural_checks(rule).closed;
  bool perfect = false;
  if (closed) {
    BindingCounter::Limits limits;
    limits.max_pca = denominator_cap(partial.support, config.min_pca_confidence);
    limits.max_body = denominator_cap(partial.support, config.min_confidence);
    auto counts = counter.count(rule, limits);
    perfect = counts.pca_complete && counts.pca_bindings == counts.support;
    if (counts.pca_complete && counts.body_complete) {
      out.measures.support = counts.support;
      out.measures.pca_bindings = counts.pca_bindings;
      out.measures.body_bindings = counts.body_bindings;
      out.qualifies = meets(out.measures.support, out.measures.head_facts, config.min_head_coverage) &&
                      meets(out.measures.support, out.measures.body_bindings, config.min_confidence) &&
                      meets(out.measures.support, out.measures.pca_bindings, config.min_pca_confidence);
    }
  }
  if (rule.length() < config.max_length && !(closed && perfect)) {
    out.children = projector.children(rule, partial.head_facts);
  }
  return out;
}

// a's PCA confidence is at least b's.
bool pca_at_least(const Measures& a, const Measures& b) {
  __extension__ using wide = unsigned __int128;
  return static_cast<wide>(a.support) * b.pca_bindings >= static_cast<wide>(b.support) * a.pca_bindings;
}

class Skyline {
 public:
  bool improves(const Rule& rule, const Measures& m) const {
    const std::size_t n = rule.body.size();
    for (std::uint32_t mask = 1; mask + 1 < (1U << n); ++mask) {
      Rule sub{{}, rule.head, std::nullopt};
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1U << i)) sub.body.push_back(rule.body[i]);
      }
      auto it = emitted_.find(canonical(sub));
      if (it != emitted_.end() && pca_at_least(it->second, m)) return false;
    }
    return true;
  }

  void add(const Rule& rule, const Measures& m) { emitted_.emplace(rule, m); }

 private:
  std::unordered_map<Rule, Measures, RuleHash> emitted_;
};

std::size_t worker_count(const MinerConfig& config, std::size_t items) {
  std::size_t w = config.workers;
  if (w == 0) w = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(w, items));
}

}  // namespace

std::vector<Rule> refine(const Rule& rule, const kg::KnowledgeGraph& graph, const MinerConfig& config) {
  require_binary_head(rule);
  std::vector<Rule> out;
  std::unordered_set<Rule, RuleHash> seen;
  const std::uint32_t fresh = rule.variable_count();
  auto push = [&](const Slot& s, kg::PredicateId p, kg::EntityId c) {
    auto child = extend(rule, make_atom(s, p, fresh, c));
    if (child && seen.insert(*child).second) out.push_back(std::move(*child));
  };
  for (const Slot& s : plan_slots(rule, config, false)) {
    for (std::size_t i = 0; i < graph.predicate_count(); ++i) {
      const kg::PredicateId p{static_cast<std::uint32_t>(i)};
      if (graph.with_predicate(p).empty()) continue;
      if (s.kind == SlotKind::ConstOut) {
        for (kg::EntityId c : graph.objects_of(p)) push(s, p, c);
      } else if (s.kind == SlotKind::ConstIn) {
        for (kg::EntityId c : graph.subjects_of(p)) push(s, p, c);
      } else {
        push(s, p, kg::EntityId{0});
      }
    }
  }
  return out;
}

std::vector<Rule> mine(const kg::KnowledgeGraph& graph, const MinerConfig& config, MiningStats* stats) {
  config.validate();
  std::vector<Rule> queue;
  for (std::size_t i = 0; i < graph.predicate_count(); ++i) {
    const kg::PredicateId p{static_cast<std::uint32_t>(i)};
    const std::uint64_t facts = graph.with_predicate(p).size();
    if (facts == 0) continue;
    Rule r = head_only(p);
    Measures m;
    m.support = facts;
    m.head_facts = facts;
    r.measures = m;
    queue.push_back(std::move(r));
  }

  std::vector<Rule> output;
  Skyline skyline;
  while (!queue.empty()) {
    if (stats) {
      stats->queue_sizes.push_back(queue.size());
      stats->rules_evaluated += queue.size();
    }
    std::vector<Outcome> outcomes(queue.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      BindingCounter counter(graph);
      Projector projector(graph, config);
      for (std::size_t i = next++; i < queue.size(); i = next++) {
        outcomes[i] = evaluate(queue[i], config, counter, projector);
      }
    };
    const std::size_t workers = worker_count(config, queue.size());
    if (workers == 1) {
      work();
    } else {
      std::vector<std::jthread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }

    std::vector<Rule> next_queue;
    std::unordered_set<Rule, RuleHash> queued;
    for (std::size_t i = 0; i < queue.size(); ++i) {
      Outcome& o = outcomes[i];
      if (o.qualifies && skyline.improves(queue[i], o.measures)) {
        Rule r = queue[i];
        r.measures = o.measures;
        skyline.add(r, o.measures);
        output.push_back(std::move(r));
      }
      for (Rule& child : o.children) {
        if (queued.insert(child).second) next_queue.push_back(std::move(child));
      }
    }
    queue = std::move(next_queue);
  }

  std::sort(output.begin(), output.end(), [](const Rule& a, const Rule& b) {
    if (a.head.predicate != b.head.predicate) return a.head.predicate < b.head.predicate;
    return a.body < b.body;
  });
  return output;
}

}  // namespace kgbench::rules
