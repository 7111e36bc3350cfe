#pragma once

#include <filesystem>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

namespace kgbench::llm {

struct TranscriptEntry {
  std::string request_id;
  std::string model;
  std::string prompt;
  std::string response;
  std::string timestamp;  // UTC, ISO 8601
};

// Append-only cache of completions keyed by request id, persisted as one JSON
// object per line. Safe for concurrent use.
class Transcript {
 public:
  // In-memory only.
  Transcript() = default;
  // Loads existing entries from `path` (if present); new entries are appended
  // to it. CorruptBundle on unparsable lines.
  explicit Transcript(std::filesystem::path path);

  std::optional<std::string> lookup(const std::string& request_id) const;
  // First entry for an id wins; later records of the same id are ignored.
  void record(TranscriptEntry entry);
  std::size_t size() const;
  const std::optional<std::filesystem::path>& path() const { return path_; }

 private:
  mutable std::mutex mutex_;
  std::optional<std::filesystem::path> path_;
  std::unordered_map<std::string, TranscriptEntry> entries_;
};

}  // namespace kgbench::llm
