#pragma once

#include <memory>
#include <string>

namespace kgbench::llm {

struct ChatRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.0;
};

// Sends one chat completion. Implementations throw RateLimited for HTTP 429,
// TransportError for any other failure, and return the message content.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual std::string complete(const ChatRequest& request) = 0;
};

// POSTs a chat-completions body ({"model", "temperature", "messages"}) to
// `endpoint` (full URL, http or https) with a bearer token when `api_key` is
// non-empty, and reads choices[0].message.content.
std::unique_ptr<Transport> make_http_transport(std::string endpoint, std::string api_key, int timeout_seconds = 60);

}  // namespace kgbench::llm
