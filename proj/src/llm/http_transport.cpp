#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "kgbench/error.hpp"
#include "kgbench/llm/transport.hpp"

namespace kgbench::llm {

namespace {

class HttpTransport final : public Transport {
 public:
  HttpTransport(std::string endpoint, std::string api_key, int timeout_seconds)
      : api_key_(std::move(api_key)), timeout_(timeout_seconds) {
    const std::size_t scheme = endpoint.find("://");
    if (scheme == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, fmt::format("endpoint '{}' must start with http:// or https://", endpoint));
    }
    const std::size_t slash = endpoint.find('/', scheme + 3);
    origin_ = endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : endpoint.substr(slash);
  }

  std::string complete(const ChatRequest& request) override {
    httplib::Client client(origin_);
    if (!client.is_valid()) throw Error(ErrorCode::TransportError, fmt::format("unsupported endpoint {}", origin_));
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    httplib::Headers headers;
    if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

    nlohmann::json body{{"model", request.model},
                        {"temperature", request.temperature},
                        {"messages", nlohmann::json::array({{{"role", "user"}, {"content", request.prompt}}})}};
    auto res = client.Post(path_, headers, body.dump(), "application/json");
    if (!res) {
      throw Error(ErrorCode::TransportError, fmt::format("{}{}: {}", origin_, path_, httplib::to_string(res.error())));
    }
    if (res->status == 429) throw Error(ErrorCode::RateLimited, fmt::format("{}{} returned 429", origin_, path_));
    if (res->status < 200 || res->status >= 300) {
      throw Error(ErrorCode::TransportError, fmt::format("{}{} returned HTTP {}", origin_, path_, res->status));
    }
    try {
      auto j = nlohmann::json::parse(res->body);
      const auto& content = j.at("choices").at(0).at("message").at("content");
      return content.is_null() ? std::string() : content.get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::TransportError, fmt::format("unexpected completion body: {}", e.what()));
    }
  }

 private:
  std::string origin_;
  std::string path_;
  std::string api_key_;
  int timeout_;
};

}  // namespace

std::unique_ptr<Transport> make_http_transport(std::string endpoint, std::string api_key, int timeout_seconds) {
  return std::make_unique<HttpTransport>(std::move(endpoint), std::move(api_key), timeout_seconds);
}

}  // namespace kgbench::llm
