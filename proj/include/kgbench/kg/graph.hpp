#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "kgbench/kg/types.hpp"

namespace kgbench::kg {

// Bidirectional label <-> dense index map. Labels are unique; indices are
// assigned in first-appearance order.
class SymbolTable {
 public:
  std::uint32_t intern(std::string_view label);
  std::optional<std::uint32_t> find(std::string_view label) const;
  const std::string& label(std::uint32_t index) const { return labels_[index]; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept {
      return std::hash<std::string_view>{}(s);
    }
  };
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t, Hash, std::equal_to<>> index_;
};

// Immutable, multi-indexed set of triples. Copies are cheap and share the
// underlying storage; a constructed graph is safe to read concurrently.
//
// Index layout (all arrays hold every triple, differently sorted):
//   spo  - by subject, subject+predicate, full-triple membership
//   ops  - by object, object+predicate
//   pso  - by predicate
//   sop  - by subject+object
class KnowledgeGraph {
 public:
  KnowledgeGraph(std::shared_ptr<const SymbolTable> entities,
                 std::shared_ptr<const SymbolTable> predicates,
                 std::vector<Triple> triples);

  std::size_t size() const { return data_->spo.size(); }
  bool empty() const { return data_->spo.empty(); }
  std::size_t entity_count() const { return data_->entities->size(); }
  std::size_t predicate_count() const { return data_->predicates->size(); }

  const std::string& label(EntityId e) const { return data_->entities->label(index_of(e)); }
  const std::string& label(PredicateId p) const { return data_->predicates->label(index_of(p)); }
  std::optional<EntityId> find_entity(std::string_view label) const;
  std::optional<PredicateId> find_predicate(std::string_view label) const;
  // Throw UnknownLabel when absent.
  EntityId entity(std::string_view label) const;
  PredicateId predicate(std::string_view label) const;

  const std::shared_ptr<const SymbolTable>& entity_symbols() const { return data_->entities; }
  const std::shared_ptr<const SymbolTable>& predicate_symbols() const { return data_->predicates; }

  bool contains(const Triple& t) const;

  // All triples in ascending (subject, predicate, object) order.
  std::span<const Triple> triples() const { return data_->spo; }

  // Triples matching every bound field, ascending (subject, predicate, object).
  std::vector<Triple> match(const TriplePattern& pattern) const;

  std::span<const Triple> with_subject(EntityId s) const;
  std::span<const Triple> with_object(EntityId o) const;
  std::span<const Triple> with_predicate(PredicateId p) const;
  // Objects ascending.
  std::span<const Triple> with_subject_predicate(EntityId s, PredicateId p) const;
  // Subjects ascending.
  std::span<const Triple> with_object_predicate(EntityId o, PredicateId p) const;
  // Predicates ascending.
  std::span<const Triple> with_subject_object(EntityId s, EntityId o) const;

  // Distinct subjects / objects of a predicate, ascending.
  std::span<const EntityId> subjects_of(PredicateId p) const;
  std::span<const EntityId> objects_of(PredicateId p) const;
  // Distinct predicates on outgoing / incoming edges of an entity, ascending.
  std::span<const PredicateId> out_predicates(EntityId e) const;
  std::span<const PredicateId> in_predicates(EntityId e) const;

  // New graph without `victims`; ids and labels are preserved.
  KnowledgeGraph remove(std::span<const Triple> victims) const;

  // Same triples, entity labels replaced (index i takes symbols->label(i)).
  KnowledgeGraph with_entity_symbols(std::shared_ptr<const SymbolTable> symbols) const;

 private:
  template <typename T>
  struct Csr {
    std::vector<std::uint32_t> offsets;
    std::vector<T> values;
    std::span<const T> row(std::uint32_t i) const {
      if (i + 1 >= offsets.size()) return {};
      return std::span<const T>(values).subspan(offsets[i], offsets[i + 1] - offsets[i]);
    }
  };

  struct Data {
    std::shared_ptr<const SymbolTable> entities;
    std::shared_ptr<const SymbolTable> predicates;
    std::vector<Triple> spo, ops, pso, sop;
    std::vector<std::uint32_t> subject_offsets, object_offsets, predicate_offsets;
    Csr<EntityId> predicate_subjects, predicate_objects;
    Csr<PredicateId> entity_out, entity_in;
  };

  explicit KnowledgeGraph(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  static std::shared_ptr<const Data> index(std::shared_ptr<const SymbolTable> entities,
                                           std::shared_ptr<const SymbolTable> predicates,
                                           std::vector<Triple> triples);

  std::shared_ptr<const Data> data_;
};

// Accumulates labelled triples, interning labels in first-appearance order.
class GraphBuilder {
 public:
  GraphBuilder();
  Triple add(std::string_view subject, std::string_view predicate, std::string_view object);
  // Registers an entity without adding a triple.
  EntityId add_entity(std::string_view label);
  std::size_t pending() const { return triples_.size(); }
  KnowledgeGraph build() &&;

 private:
  std::shared_ptr<SymbolTable> entities_;
  std::shared_ptr<SymbolTable> predicates_;
  std::vector<Triple> triples_;
};

}  // namespace kgbench::kg
