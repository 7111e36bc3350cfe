#include "kgbench/util/text.hpp"

#include <cctype>

#include <fmt/format.h>

namespace kgbench::util {

std::vector<std::string_view> split(std::string_view text, char delimiter) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = text.find(delimiter, start);
    if (pos == std::string_view::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
}

std::string_view trim(std::string_view text) {
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  while (!text.empty() && is_space(text.front())) text.remove_prefix(1);
  while (!text.empty() && is_space(text.back())) text.remove_suffix(1);
  return text;
}

bool contains_word(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  auto is_word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
  std::size_t pos = haystack.find(needle);
  while (pos != std::string_view::npos) {
    bool left_ok = pos == 0 || !is_word(haystack[pos - 1]) || !is_word(needle.front());
    std::size_t end = pos + needle.size();
    bool right_ok = end == haystack.size() || !is_word(haystack[end]) || !is_word(needle.back());
    if (left_ok && right_ok) return true;
    pos = haystack.find(needle, pos + 1);
  }
  return false;
}

std::string with_thousands(std::uint64_t value) {
  std::string digits = std::to_string(value);
  std::string out;
  int since_group = static_cast<int>(digits.size() % 3);
  if (since_group == 0) since_group = 3;
  for (char d : digits) {
    if (since_group == 0) {
      out.push_back(',');
      since_group = 3;
    }
    out.push_back(d);
    --since_group;
  }
  return out;
}

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", hash);
}

}  // namespace kgbench::util
