#include "kgbench/llm/client.hpp"

#include <thread>

#include <fmt/format.h>

#include "kgbench/error.hpp"
#include "kgbench/util/text.hpp"

namespace kgbench::llm {

PromptRequest make_request(std::string prompt, std::string model, unsigned attempt) {
  PromptRequest r;
  r.request_id = util::fnv1a_hex(fmt::format("{}\x1f{}\x1f{}", model, prompt, attempt));
  r.prompt = std::move(prompt);
  r.model_name = std::move(model);
  return r;
}

std::string first_line(std::string_view text) {
  for (std::string_view line : util::split(text, '\n')) {
    line = util::trim(line);
    if (!line.empty()) return std::string(line);
  }
  return {};
}

LlmClient::LlmClient(Transport* transport, Transcript& transcript, ClientConfig config)
    : transport_(transport), transcript_(transcript), config_(std::move(config)) {
  if (!config_.sleep) config_.sleep = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
  if (config_.max_attempts == 0) config_.max_attempts = 1;
}

std::string LlmClient::generate(const PromptRequest& request) {
  if (auto cached = transcript_.lookup(request.request_id)) return *cached;
  if (!transport_) {
    throw Error(ErrorCode::TransportError,
                fmt::format("request {} is not in the transcript and no endpoint is configured", request.request_id));
  }
  std::chrono::milliseconds delay = config_.backoff_base;
  for (unsigned attempt = 1;; ++attempt) {
    try {
      ++calls_;
      std::string raw = transport_->complete({request.model_name, request.prompt, 0.0});
      std::string text = first_line(raw);
      if (text.empty()) throw Error(ErrorCode::EmptyCompletion, fmt::format("empty completion for {}", request.request_id));
      transcript_.record({request.request_id, request.model_name, request.prompt, text, {}});
      return text;
    } catch (const Error& e) {
      const bool retriable = e.code() == ErrorCode::RateLimited || e.code() == ErrorCode::TransportError;
      if (!retriable || attempt >= config_.max_attempts) throw;
    }
    config_.sleep(delay);
    delay *= 2;
  }
}

}  // namespace kgbench::llm
