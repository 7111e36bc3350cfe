#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <string>

#include "kgbench/llm/transcript.hpp"
#include "kgbench/llm/transport.hpp"

namespace kgbench::llm {

inline constexpr std::string_view kEndpointEnv = "KGBENCH_LLM_ENDPOINT";
inline constexpr std::string_view kApiKeyEnv = "KGBENCH_LLM_API_KEY";
inline constexpr std::string_view kModelEnv = "KGBENCH_LLM_MODEL";
inline constexpr std::string_view kDefaultModel = "gpt-4";

struct PromptRequest {
  std::string prompt;
  double temperature = 0.0;  // always 0
  std::string model_name;
  std::string request_id;
};

// request_id is a hash of model, prompt and attempt number, so a
// regeneration gets its own transcript entry.
PromptRequest make_request(std::string prompt, std::string model, unsigned attempt = 0);

struct ClientConfig {
  unsigned max_attempts = 3;
  std::chrono::milliseconds backoff_base{500};  // doubled after each retry
  std::function<void(std::chrono::milliseconds)> sleep;  // defaults to std::this_thread::sleep_for
};

// Transcript-first completion client. A cached request returns the recorded
// response without touching the transport. Otherwise RateLimited and
// TransportError are retried with exponential backoff up to max_attempts and
// then rethrown. Responses are trimmed to their first non-empty line;
// EmptyCompletion if nothing is left.
class LlmClient {
 public:
  // transport may be null (replay only: a cache miss raises TransportError).
  LlmClient(Transport* transport, Transcript& transcript, ClientConfig config = {});

  std::string generate(const PromptRequest& request);

  std::uint64_t network_calls() const { return calls_.load(); }

 private:
  Transport* transport_;
  Transcript& transcript_;
  ClientConfig config_;
  std::atomic<std::uint64_t> calls_{0};
};

// Trimmed first non-empty line.
std::string first_line(std::string_view text);

}  // namespace kgbench::llm
