#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "kgbench/rules/rule.hpp"

namespace kgbench::classify {

enum class RuleType : std::uint8_t {
  Symmetry,      // r(x,y) => r(y,x)
  Inversion,     // r1(x,y) => r2(y,x)
  Hierarchy,     // r1(x,y) => r2(x,y)
  Composition,   // r1(x,y) & r2(y,z) => r3(x,z)
  LongChain,     // r1(x,y) & r2(y,z) & r3(z,w) => r4(x,w), or longer
  Triangle,      // r1(x,y) & r2(x,z) => r3(y,z)
  Intersection,  // r1(x,y) & r2(x,y) [& ...] => r3(x,y)
  Other,
};

inline constexpr std::size_t kRuleTypeCount = 8;
inline constexpr std::array<RuleType, kRuleTypeCount> kAllRuleTypes{
    RuleType::Symmetry,  RuleType::Inversion, RuleType::Hierarchy,    RuleType::Composition,
    RuleType::LongChain, RuleType::Triangle,  RuleType::Intersection, RuleType::Other};

std::string_view to_string(RuleType type);
std::optional<RuleType> parse_rule_type(std::string_view text);

// First matching pattern, in declaration order. Patterns are matched on
// argument positions (directed) modulo variable renaming; constants never
// match a pattern.
RuleType classify(const rules::Rule& rule);

// Summary bucket: LongChain, Triangle and Intersection report as Other.
RuleType summary_bucket(RuleType type);

struct TypeHistogram {
  std::array<std::uint64_t, kRuleTypeCount> counts{};

  std::uint64_t operator[](RuleType t) const { return counts[static_cast<std::size_t>(t)]; }
  std::uint64_t total() const;
};

// Counts per summary bucket; only Symmetry, Inversion, Hierarchy,
// Composition and Other are ever non-zero.
TypeHistogram type_histogram(std::span<const rules::Rule> rules);

// Two-column table: one row per summary bucket, then Total.
std::string format_histogram(const TypeHistogram& histogram);

}  // namespace kgbench::classify
