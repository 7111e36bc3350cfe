#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>

namespace kgbench::kg {

// Dense ids, contiguous from 0 within one graph.
enum class EntityId : std::uint32_t {};
enum class PredicateId : std::uint32_t {};

constexpr std::uint32_t index_of(EntityId e) { return static_cast<std::uint32_t>(e); }
constexpr std::uint32_t index_of(PredicateId p) { return static_cast<std::uint32_t>(p); }

struct Triple {
  EntityId subject{};
  PredicateId predicate{};
  EntityId object{};

  friend auto operator<=>(const Triple&, const Triple&) = default;
};

// Unset fields are wildcards.
struct TriplePattern {
  std::optional<EntityId> subject;
  std::optional<PredicateId> predicate;
  std::optional<EntityId> object;
};

// Which end of a removed triple the question is about.
enum class Direction { HeadAsTopic, TailAsTopic };

struct TripleHash {
  std::size_t operator()(const Triple& t) const noexcept {
    std::uint64_t h = index_of(t.subject);
    h = h * 0x9e3779b97f4a7c15ULL ^ index_of(t.predicate);
    h = h * 0x9e3779b97f4a7c15ULL ^ index_of(t.object);
    return static_cast<std::size_t>(h ^ (h >> 29));
  }
};

}  // namespace kgbench::kg
