#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace lina::llm {

struct ChatMessage {
  std::string role;  // system | user | assistant
  std::string content;
  bool operator==(const ChatMessage&) const = default;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.3;
  std::optional<long> max_tokens;
  std::string tag;       // pipeline stage label; excluded from the cache key
  int step = 0;          // step index within a stage, for trace export
  int sample_index = 0;  // distinguishes repeated samples at one temperature
};

struct TokenUsage {
  long prompt = 0;
  long completion = 0;
  bool operator==(const TokenUsage&) const = default;
};

struct ChatResponse {
  std::string content;
  TokenUsage usage;
  std::chrono::milliseconds latency{0};
  std::string provider;
};

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FixtureMissError : std::runtime_error {
  FixtureMissError(const std::string& digest, const std::string& tag)
      : std::runtime_error("replay fixture has no entry for digest " + digest +
                           (tag.empty() ? "" : " (stage '" + tag + "')")),
        digest(digest),
        tag(tag) {}
  std::string digest;
  std::string tag;
};

struct ScriptUnderflowError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Provider {
 public:
  virtual ~Provider() = default;
  virtual ChatResponse complete(const ChatRequest& request) = 0;
  virtual std::string name() const = 0;
};

// SHA-256 hex digest of the canonical request serialization: model,
// messages, temperature, and sample_index with sorted keys. Stable across
// runs and platforms.
std::string cache_key(const ChatRequest& request);

std::string sha256_hex(const std::string& bytes);

nlohmann::json request_to_json(const ChatRequest& request);
nlohmann::json response_to_json(const ChatResponse& response);
ChatResponse response_from_json(const nlohmann::json& j);

}  // namespace lina::llm
