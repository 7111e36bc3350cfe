#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace kgbench::util {

std::vector<std::string_view> split(std::string_view text, char delimiter);

std::string_view trim(std::string_view text);

// True when `needle` occurs in `haystack` delimited on both sides by a
// non-alphanumeric character or the string boundary.
bool contains_word(std::string_view haystack, std::string_view needle);

// 17615 -> "17,615"
std::string with_thousands(std::uint64_t value);

// 64-bit FNV-1a, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace kgbench::util
