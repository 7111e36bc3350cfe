#include "kgbench/kg/graph.hpp"

#include <algorithm>
#include <unordered_set>

#include <fmt/format.h>

#include "kgbench/error.hpp"

namespace kgbench::kg {

std::uint32_t SymbolTable::intern(std::string_view label) {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(labels_.size());
  labels_.emplace_back(label);
  index_.emplace(labels_.back(), id);
  return id;
}

std::optional<std::uint32_t> SymbolTable::find(std::string_view label) const {
  if (auto it = index_.find(label); it != index_.end()) return it->second;
  return std::nullopt;
}

namespace {

bool spo_less(const Triple& a, const Triple& b) { return a < b; }

bool ops_less(const Triple& a, const Triple& b) {
  if (a.object != b.object) return a.object < b.object;
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  return a.subject < b.subject;
}

bool pso_less(const Triple& a, const Triple& b) {
  if (a.predicate != b.predicate) return a.predicate < b.predicate;
  if (a.subject != b.subject) return a.subject < b.subject;
  return a.object < b.object;
}

bool sop_less(const Triple& a, const Triple& b) {
  if (a.subject != b.subject) return a.subject < b.subject;
  if (a.object != b.object) return a.object < b.object;
  return a.predicate < b.predicate;
}

template <typename Key>
std::vector<std::uint32_t> offsets_by(const std::vector<Triple>& sorted, std::size_t keys, Key key) {
  std::vector<std::uint32_t> offsets(keys + 1, 0);
  for (const Triple& t : sorted) ++offsets[key(t) + 1];
  for (std::size_t i = 1; i < offsets.size(); ++i) offsets[i] += offsets[i - 1];
  return offsets;
}

}  // namespace

std::shared_ptr<const KnowledgeGraph::Data> KnowledgeGraph::index(
    std::shared_ptr<const SymbolTable> entities, std::shared_ptr<const SymbolTable> predicates,
    std::vector<Triple> triples) {
  auto data = std::make_shared<Data>();
  const std::size_t n_entities = entities->size();
  const std::size_t n_predicates = predicates->size();
  for (const Triple& t : triples) {
    if (index_of(t.subject) >= n_entities || index_of(t.object) >= n_entities ||
        index_of(t.predicate) >= n_predicates) {
      throw Error(ErrorCode::InvalidConfig, "triple references an id outside the symbol tables");
    }
  }
  data->entities = std::move(entities);
  data->predicates = std::move(predicates);

  std::sort(triples.begin(), triples.end(), spo_less);
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  data->spo = std::move(triples);
  data->ops = data->spo;
  std::sort(data->ops.begin(), data->ops.end(), ops_less);
  data->pso = data->spo;
  std::sort(data->pso.begin(), data->pso.end(), pso_less);
  data->sop = data->spo;
  std::sort(data->sop.begin(), data->sop.end(), sop_less);

  data->subject_offsets =
      offsets_by(data->spo, n_entities, [](const Triple& t) { return index_of(t.subject); });
  data->object_offsets =
      offsets_by(data->ops, n_entities, [](const Triple& t) { return index_of(t.object); });
  data->predicate_offsets =
      offsets_by(data->pso, n_predicates, [](const Triple& t) { return index_of(t.predicate); });

  // Distinct subjects / objects per predicate.
  auto& ps = data->predicate_subjects;
  ps.offsets.assign(n_predicates + 1, 0);
  for (std::size_t p = 0; p < n_predicates; ++p) {
    for (std::uint32_t i = data->predicate_offsets[p]; i < data->predicate_offsets[p + 1]; ++i) {
      const Triple& t = data->pso[i];
      if (ps.values.size() == ps.offsets[p] || ps.values.back() != t.subject) ps.values.push_back(t.subject);
    }
    ps.offsets[p + 1] = static_cast<std::uint32_t>(ps.values.size());
  }
  auto& po = data->predicate_objects;
  po.offsets.assign(n_predicates + 1, 0);
  std::vector<EntityId> scratch;
  for (std::size_t p = 0; p < n_predicates; ++p) {
    scratch.clear();
    for (std::uint32_t i = data->predicate_offsets[p]; i < data->predicate_offsets[p + 1]; ++i) {
      scratch.push_back(data->pso[i].object);
    }
    std::sort(scratch.begin(), scratch.end());
    scratch.erase(std::unique(scratch.begin(), scratch.end()), scratch.end());
    po.values.insert(po.values.end(), scratch.begin(), scratch.end());
    po.offsets[p + 1] = static_cast<std::uint32_t>(po.values.size());
  }

  // Distinct predicates per entity; spo and ops are predicate-grouped per key.
  auto build_predicates = [n_entities](const std::vector<Triple>& sorted,
                                       const std::vector<std::uint32_t>& offsets) {
    Csr<PredicateId> csr;
    csr.offsets.assign(n_entities + 1, 0);
    for (std::size_t e = 0; e < n_entities; ++e) {
      std::size_t row_start = csr.values.size();
      for (std::uint32_t i = offsets[e]; i < offsets[e + 1]; ++i) {
        PredicateId p = sorted[i].predicate;
        if (csr.values.size() == row_start || csr.values.back() != p) csr.values.push_back(p);
      }
      csr.offsets[e + 1] = static_cast<std::uint32_t>(csr.values.size());
    }
    return csr;
  };
  data->entity_out = build_predicates(data->spo, data->subject_offsets);
  data->entity_in = build_predicates(data->ops, data->object_offsets);
  return data;
}

KnowledgeGraph::KnowledgeGraph(std::shared_ptr<const SymbolTable> entities,
                               std::shared_ptr<const SymbolTable> predicates,
                               std::vector<Triple> triples)
    : data_(index(std::move(entities), std::move(predicates), std::move(triples))) {}

std::optional<EntityId> KnowledgeGraph::find_entity(std::string_view label) const {
  if (auto id = data_->entities->find(label)) return EntityId{*id};
  return std::nullopt;
}

std::optional<PredicateId> KnowledgeGraph::find_predicate(std::string_view label) const {
  if (auto id = data_->predicates->find(label)) return PredicateId{*id};
  return std::nullopt;
}

EntityId KnowledgeGraph::entity(std::string_view label) const {
  if (auto id = find_entity(label)) return *id;
  throw Error(ErrorCode::UnknownLabel, fmt::format("unknown entity '{}'", label));
}

PredicateId KnowledgeGraph::predicate(std::string_view label) const {
  if (auto id = find_predicate(label)) return *id;
  throw Error(ErrorCode::UnknownLabel, fmt::format("unknown predicate '{}'", label));
}

std::span<const Triple> KnowledgeGraph::with_subject(EntityId s) const {
  const auto i = index_of(s);
  if (i >= entity_count()) return {};
  const auto& off = data_->subject_offsets;
  return std::span<const Triple>(data_->spo).subspan(off[i], off[i + 1] - off[i]);
}

std::span<const Triple> KnowledgeGraph::with_object(EntityId o) const {
  const auto i = index_of(o);
  if (i >= entity_count()) return {};
  const auto& off = data_->object_offsets;
  return std::span<const Triple>(data_->ops).subspan(off[i], off[i + 1] - off[i]);
}

std::span<const Triple> KnowledgeGraph::with_predicate(PredicateId p) const {
  const auto i = index_of(p);
  if (i >= predicate_count()) return {};
  const auto& off = data_->predicate_offsets;
  return std::span<const Triple>(data_->pso).subspan(off[i], off[i + 1] - off[i]);
}

std::span<const Triple> KnowledgeGraph::with_subject_predicate(EntityId s, PredicateId p) const {
  auto row = with_subject(s);
  auto lo = std::lower_bound(row.begin(), row.end(), p,
                             [](const Triple& t, PredicateId key) { return t.predicate < key; });
  auto hi = std::upper_bound(lo, row.end(), p,
                             [](PredicateId key, const Triple& t) { return key < t.predicate; });
  return {lo, hi};
}

std::span<const Triple> KnowledgeGraph::with_object_predicate(EntityId o, PredicateId p) const {
  auto row = with_object(o);
  auto lo = std::lower_bound(row.begin(), row.end(), p,
                             [](const Triple& t, PredicateId key) { return t.predicate < key; });
  auto hi = std::upper_bound(lo, row.end(), p,
                             [](PredicateId key, const Triple& t) { return key < t.predicate; });
  return {lo, hi};
}

std::span<const Triple> KnowledgeGraph::with_subject_object(EntityId s, EntityId o) const {
  const auto i = index_of(s);
  if (i >= entity_count()) return {};
  const auto& off = data_->subject_offsets;
  auto row = std::span<const Triple>(data_->sop).subspan(off[i], off[i + 1] - off[i]);
  auto lo = std::lower_bound(row.begin(), row.end(), o,
                             [](const Triple& t, EntityId key) { return t.object < key; });
  auto hi = std::upper_bound(lo, row.end(), o,
                             [](EntityId key, const Triple& t) { return key < t.object; });
  return {lo, hi};
}

std::span<const EntityId> KnowledgeGraph::subjects_of(PredicateId p) const {
  return data_->predicate_subjects.row(index_of(p));
}

std::span<const EntityId> KnowledgeGraph::objects_of(PredicateId p) const {
  return data_->predicate_objects.row(index_of(p));
}

std::span<const PredicateId> KnowledgeGraph::out_predicates(EntityId e) const {
  return data_->entity_out.row(index_of(e));
}

std::span<const PredicateId> KnowledgeGraph::in_predicates(EntityId e) const {
  return data_->entity_in.row(index_of(e));
}

bool KnowledgeGraph::contains(const Triple& t) const {
  auto row = with_subject_predicate(t.subject, t.predicate);
  return std::binary_search(row.begin(), row.end(), t);
}

std::vector<Triple> KnowledgeGraph::match(const TriplePattern& pattern) const {
  const auto& [s, p, o] = pattern;
  std::vector<Triple> out;
  if (s && p && o) {
    Triple t{*s, *p, *o};
    if (index_of(*s) < entity_count() && index_of(*o) < entity_count() && contains(t)) out.push_back(t);
    return out;
  }
  std::span<const Triple> range;
  bool sorted = true;
  if (s && p) {
    range = with_subject_predicate(*s, *p);
  } else if (s && o) {
    range = with_subject_object(*s, *o);
  } else if (s) {
    range = with_subject(*s);
  } else if (p && o) {
    range = with_object_predicate(*o, *p);
  } else if (p) {
    range = with_predicate(*p);
  } else if (o) {
    range = with_object(*o);
    sorted = false;
  } else {
    range = triples();
  }
  out.assign(range.begin(), range.end());
  if (!sorted) std::sort(out.begin(), out.end());
  return out;
}

KnowledgeGraph KnowledgeGraph::remove(std::span<const Triple> victims) const {
  std::unordered_set<Triple, TripleHash> doomed;
  doomed.reserve(victims.size());
  for (const Triple& t : victims) {
    if (index_of(t.subject) >= entity_count() || index_of(t.object) >= entity_count() ||
        index_of(t.predicate) >= predicate_count() || !contains(t)) {
      throw Error(ErrorCode::NotPresent,
                  fmt::format("triple ({}, {}, {}) is not in the graph", index_of(t.subject),
                              index_of(t.predicate), index_of(t.object)));
    }
    doomed.insert(t);
  }
  std::vector<Triple> kept;
  kept.reserve(size() - doomed.size());
  for (const Triple& t : data_->spo) {
    if (!doomed.contains(t)) kept.push_back(t);
  }
  return KnowledgeGraph(data_->entities, data_->predicates, std::move(kept));
}

KnowledgeGraph KnowledgeGraph::with_entity_symbols(std::shared_ptr<const SymbolTable> symbols) const {
  if (symbols->size() != entity_count()) {
    throw Error(ErrorCode::InvalidConfig, "replacement symbol table has a different entity count");
  }
  auto data = std::make_shared<Data>(*data_);
  data->entities = std::move(symbols);
  return KnowledgeGraph(std::shared_ptr<const Data>(std::move(data)));
}

GraphBuilder::GraphBuilder()
    : entities_(std::make_shared<SymbolTable>()), predicates_(std::make_shared<SymbolTable>()) {}

Triple GraphBuilder::add(std::string_view subject, std::string_view predicate, std::string_view object) {
  Triple t;
  t.subject = EntityId{entities_->intern(subject)};
  t.predicate = PredicateId{predicates_->intern(predicate)};
  t.object = EntityId{entities_->intern(object)};
  triples_.push_back(t);
  return t;
}

EntityId GraphBuilder::add_entity(std::string_view label) { return EntityId{entities_->intern(label)}; }

KnowledgeGraph GraphBuilder::build() && {
  return KnowledgeGraph(std::move(entities_), std::move(predicates_), std::move(triples_));
}

}  // namespace kgbench::kg
