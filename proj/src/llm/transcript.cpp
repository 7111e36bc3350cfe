#include "kgbench/llm/transcript.hpp"

#include <chrono>
#include <fstream>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "kgbench/error.hpp"

namespace kgbench::llm {

Transcript::Transcript(std::filesystem::path path) : path_(std::move(path)) {
  std::ifstream in(*path_, std::ios::binary);
  if (!in) return;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      TranscriptEntry e{j.at("request_id").get<std::string>(), j.value("model", ""), j.at("prompt").get<std::string>(),
                        j.at("response").get<std::string>(), j.value("timestamp", "")};
      entries_.emplace(e.request_id, std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw Error(ErrorCode::CorruptBundle,
                  fmt::format("{} line {}: {}", path_->string(), number, ex.what()));
    }
  }
}

std::optional<std::string> Transcript::lookup(const std::string& request_id) const {
  std::lock_guard lock(mutex_);
  auto it = entries_.find(request_id);
  if (it == entries_.end()) return std::nullopt;
  return it->second.response;
}

void Transcript::record(TranscriptEntry entry) {
  std::lock_guard lock(mutex_);
  if (entries_.count(entry.request_id)) return;
  if (entry.timestamp.empty()) {
    entry.timestamp = fmt::format("{:%Y-%m-%dT%H:%M:%SZ}",
                                  std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now()));
  }
  if (path_) {
    std::ofstream out(*path_, std::ios::binary | std::ios::app);
    if (!out) throw Error(ErrorCode::Io, fmt::format("cannot append to {}", path_->string()));
    nlohmann::json j{{"request_id", entry.request_id},
                     {"model", entry.model},
                     {"prompt", entry.prompt},
                     {"response", entry.response},
                     {"timestamp", entry.timestamp}};
    out << j.dump() << '\n';
  }
  entries_.emplace(entry.request_id, std::move(entry));
}

std::size_t Transcript::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace kgbench::llm
