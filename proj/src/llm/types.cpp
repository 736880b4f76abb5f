#include "lina/llm/types.hpp"

#include <openssl/evp.h>

namespace lina::llm {

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

std::string cache_key(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  // nlohmann::json objects keep keys sorted, so dump() is canonical.
  const nlohmann::json canonical = {
      {"model", request.model},
      {"messages", std::move(messages)},
      {"temperature", request.temperature},
      {"sample_index", request.sample_index},
  };
  return sha256_hex(canonical.dump());
}

nlohmann::json request_to_json(const ChatRequest& request) {
  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  nlohmann::json j = {
      {"model", request.model},
      {"messages", std::move(messages)},
      {"temperature", request.temperature},
      {"tag", request.tag},
      {"step", request.step},
      {"sample_index", request.sample_index},
  };
  if (request.max_tokens) j["max_tokens"] = *request.max_tokens;
  return j;
}

nlohmann::json response_to_json(const ChatResponse& response) {
  return {
      {"content", response.content},
      {"prompt_tokens", response.usage.prompt},
      {"completion_tokens", response.usage.completion},
      {"latency_ms", response.latency.count()},
      {"provider", response.provider},
  };
}

ChatResponse response_from_json(const nlohmann::json& j) {
  ChatResponse r;
  r.content = j.at("content").get<std::string>();
  r.usage.prompt = j.at("prompt_tokens").get<long>();
  r.usage.completion = j.at("completion_tokens").get<long>();
  r.latency = std::chrono::milliseconds(j.at("latency_ms").get<long>());
  r.provider = j.at("provider").get<std::string>();
  return r;
}

}  // namespace lina::llm
