#include "support/oracle.hpp"

#include <algorithm>
#include <map>
#include <utility>

namespace kgbench::fixtures {

using rules::Atom;
using rules::Measures;
using rules::Rule;
using rules::Term;

namespace {

void join(const std::vector<kg::Triple>& triples, const std::vector<Atom>& atoms, std::size_t i, Assignment& a,
          const std::function<void(const Assignment&)>& visit) {
  if (i == atoms.size()) {
    visit(a);
    return;
  }
  const Atom& atom = atoms[i];
  for (const kg::Triple& t : triples) {
    if (t.predicate != atom.predicate) continue;
    Assignment saved = a;
    bool ok = true;
    auto unify = [&](Term term, kg::EntityId e) {
      const std::int64_t v = kg::index_of(e);
      if (term.is_constant()) {
        ok = ok && term.entity() == e;
        return;
      }
      std::int64_t& slot = a[term.variable_index()];
      if (slot == -1) {
        slot = v;
      } else {
        ok = ok && slot == v;
      }
    };
    unify(atom.subject, t.subject);
    unify(atom.object, t.object);
    if (ok) join(triples, atoms, i + 1, a, visit);
    a = std::move(saved);
  }
}

std::size_t variables_of(const Rule& rule) {
  std::size_t n = 0;
  auto see = [&](Term t) {
    if (t.is_variable()) n = std::max<std::size_t>(n, t.variable_index() + 1);
  };
  for (const Atom& a : rule.body) {
    see(a.subject);
    see(a.object);
  }
  see(rule.head.subject);
  see(rule.head.object);
  return n;
}

bool pca_at_least(const Measures& a, const Measures& b) {
  return static_cast<long double>(a.support) * b.pca_bindings >= static_cast<long double>(b.support) * a.pca_bindings;
}

bool meets(std::uint64_t num, std::uint64_t den, double threshold) {
  return den != 0 && static_cast<double>(num) / static_cast<double>(den) >= threshold;
}

}  // namespace

void for_each_assignment(const std::vector<kg::Triple>& triples, const std::vector<Atom>& atoms, std::size_t variables,
                         const std::function<void(const Assignment&)>& visit) {
  Assignment a(variables, -1);
  join(triples, atoms, 0, a, visit);
}

Measures brute_measures(const std::vector<kg::Triple>& triples, const Rule& rule) {
  const std::uint32_t xs = rule.head.subject.variable_index();
  const std::uint32_t ys = rule.head.object.variable_index();
  std::set<std::pair<std::int64_t, std::int64_t>> body_pairs;
  for_each_assignment(triples, rule.body, variables_of(rule),
                      [&](const Assignment& a) { body_pairs.emplace(a[xs], a[ys]); });
  std::set<std::pair<std::int64_t, std::int64_t>> heads;
  std::set<std::int64_t> head_subjects;
  for (const kg::Triple& t : triples) {
    if (t.predicate != rule.head.predicate) continue;
    heads.emplace(kg::index_of(t.subject), kg::index_of(t.object));
    head_subjects.insert(kg::index_of(t.subject));
  }
  Measures m;
  m.head_facts = heads.size();
  m.body_bindings = body_pairs.size();
  for (const auto& pr : body_pairs) {
    if (heads.count(pr)) ++m.support;
    if (head_subjects.count(pr.first)) ++m.pca_bindings;
  }
  return m;
}

std::vector<Rule> oracle_mine(const kg::KnowledgeGraph& graph, const OracleThresholds& t) {
  const std::vector<kg::Triple> triples(graph.triples().begin(), graph.triples().end());
  std::set<kg::PredicateId> preds;
  for (const kg::Triple& tr : triples) preds.insert(tr.predicate);

  const std::vector<std::pair<std::uint32_t, std::uint32_t>> args{{0, 1}, {1, 0}, {0, 2}, {2, 0}, {1, 2}, {2, 1}};
  std::vector<Atom> atoms;
  for (kg::PredicateId p : preds) {
    for (auto [s, o] : args) atoms.push_back(Atom{p, Term::variable(s), Term::variable(o)});
  }
  auto uses_z = [](const Atom& a) { return a.subject.variable_index() == 2 || a.object.variable_index() == 2; };
  auto xy_only = [&](const Atom& a) { return !uses_z(a); };

  auto qualifies = [&](const Measures& m) {
    return meets(m.support, m.head_facts, t.head_coverage) && meets(m.support, m.body_bindings, t.confidence) &&
           meets(m.support, m.pca_bindings, t.pca_confidence);
  };

  std::vector<Rule> out;
  for (kg::PredicateId r : preds) {
    const Atom head{r, Term::variable(0), Term::variable(1)};
    std::map<std::vector<Atom>, Measures> short_rules;  // every closed length-2 rule
    std::map<std::vector<Atom>, Measures> emitted;
    for (const Atom& a : atoms) {
      if (!xy_only(a) || a == head) continue;
      Rule rule{{a}, head, std::nullopt};
      Measures m = brute_measures(triples, rule);
      short_rules[{a}] = m;
      // Queue admission needs the head coverage threshold.
      if (qualifies(m)) {
        emitted[{a}] = m;
        rule.measures = m;
        out.push_back(rule);
      }
    }
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      for (std::size_t j = i + 1; j < atoms.size(); ++j) {
        const Atom& a = atoms[i];
        const Atom& b = atoms[j];
        if (a == head || b == head) continue;
        // Closed: ?2, if used, must be in both atoms; ?0 and ?1 each need a body atom.
        if (uses_z(a) != uses_z(b)) continue;
        auto mentions = [](const Atom& x, std::uint32_t v) {
          return x.subject.variable_index() == v || x.object.variable_index() == v;
        };
        if (!(mentions(a, 0) || mentions(b, 0)) || !(mentions(a, 1) || mentions(b, 1))) continue;

        std::vector<Atom> body{a, b};
        std::sort(body.begin(), body.end());
        Rule rule{body, head, std::nullopt};
        Measures m = brute_measures(triples, rule);
        if (!qualifies(m)) continue;

        // Reachable unless every one-atom prefix is closed with PCA 1 (and so
        // never refined).
        bool reachable = false;
        for (const Atom& first : {a, b}) {
          if (!xy_only(first)) {
            reachable = true;
            continue;
          }
          const Measures& pm = short_rules.at({first});
          if (pm.support != pm.pca_bindings) reachable = true;
        }
        if (!reachable) continue;

        bool dominated = false;
        for (const Atom& sub : {a, b}) {
          auto it = emitted.find({sub});
          if (it != emitted.end() && pca_at_least(it->second, m)) dominated = true;
        }
        if (dominated) continue;
        rule.measures = m;
        out.push_back(rule);
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const Rule& x, const Rule& y) {
    return std::tie(x.head.predicate, x.body) < std::tie(y.head.predicate, y.body);
  });
  return out;
}

std::set<kg::Triple> forward_chain(const std::vector<kg::Triple>& triples, const Rule& rule) {
  std::set<kg::Triple> derived;
  for_each_assignment(triples, rule.body, variables_of(rule), [&](const Assignment& a) {
    auto value = [&](Term term) {
      return term.is_constant() ? term.entity() : kg::EntityId{static_cast<std::uint32_t>(a[term.variable_index()])};
    };
    derived.insert(kg::Triple{value(rule.head.subject), rule.head.predicate, value(rule.head.object)});
  });
  return derived;
}

}  // namespace kgbench::fixtures
