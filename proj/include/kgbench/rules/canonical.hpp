#pragma once

#include <cstddef>

#include "kgbench/rules/rule.hpp"

namespace kgbench::rules {

// Renames variables so head variables come first (?0, ?1) and the others are
// numbered to give the lexicographically smallest sorted body. Two rules are
// equal modulo variable renaming iff their canonical forms are equal.
Rule canonical(const Rule& rule);

struct RuleHash {
  std::size_t operator()(const Rule& rule) const noexcept;
};

}  // namespace kgbench::rules
