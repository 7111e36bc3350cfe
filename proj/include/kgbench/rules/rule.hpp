#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <vector>

#include "kgbench/kg/types.hpp"

namespace kgbench::rules {

// Argument of an atom: a variable (small index) or a constant entity.
class Term {
 public:
  constexpr Term() = default;

  static constexpr Term variable(std::uint32_t index) { return Term(-static_cast<std::int64_t>(index) - 1); }
  static constexpr Term constant(kg::EntityId entity) { return Term(static_cast<std::int64_t>(kg::index_of(entity))); }

  constexpr bool is_variable() const { return code_ < 0; }
  constexpr bool is_constant() const { return code_ >= 0; }
  constexpr std::uint32_t variable_index() const { return static_cast<std::uint32_t>(-code_ - 1); }
  constexpr kg::EntityId entity() const { return kg::EntityId{static_cast<std::uint32_t>(code_)}; }
  constexpr std::int64_t code() const { return code_; }

  friend constexpr auto operator<=>(const Term&, const Term&) = default;

 private:
  constexpr explicit Term(std::int64_t code) : code_(code) {}
  std::int64_t code_ = -1;
};

struct Atom {
  kg::PredicateId predicate{};
  Term subject;
  Term object;

  friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Exact grounding counts behind the quality measures. Ratios are derived so
// that threshold checks and comparisons can be done on integers.
struct Measures {
  std::uint64_t support = 0;
  std::uint64_t head_facts = 0;     // |{sigma : sigma(H) in G}|
  std::uint64_t body_bindings = 0;  // distinct head-variable pairs satisfying the body
  std::uint64_t pca_bindings = 0;   // ... restricted to subjects with some head fact

  double head_coverage() const { return ratio(support, head_facts); }
  double confidence() const { return ratio(support, body_bindings); }
  double pca_confidence() const { return ratio(support, pca_bindings); }

  friend bool operator==(const Measures&, const Measures&) = default;

 private:
  static double ratio(std::uint64_t num, std::uint64_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  }
};

// Horn rule  B1 & ... & Bn => H.
struct Rule {
  std::vector<Atom> body;
  Atom head;
  std::optional<Measures> measures;

  std::size_t length() const { return body.size() + 1; }
  // One past the largest variable index used.
  std::uint32_t variable_count() const;

  // Syntactic equality; cached measures are ignored.
  friend bool operator==(const Rule& a, const Rule& b) { return a.head == b.head && a.body == b.body; }
};

// Head-only rule  T => p(?0, ?1).
Rule head_only(kg::PredicateId predicate);

struct StructuralFlags {
  bool closed = false;
  bool connected = false;
  bool safe = false;

  bool all() const { return closed && connected && safe; }
  friend bool operator==(const StructuralFlags&, const StructuralFlags&) = default;
};

// closed:    every variable occurs in at least two atoms
// connected: atoms form one component under shared variables or constants
// safe:      head variables all occur in the body
StructuralFlags structural_checks(const Rule& rule);

// Variables occurring in exactly one atom.
std::vector<std::uint32_t> open_variables(const Rule& rule);

}  // namespace kgbench::rules
