#pragma once

#include <memory>

#include "lina/llm/live.hpp"

namespace lina::llm {

enum class Backend { Live, Replay, Scripted };

Backend backend_from_string(const std::string& s);
const char* to_string(Backend b);

struct ProviderConfig {
  Backend backend = Backend::Replay;
  // Live
  std::string endpoint = "https://api.openai.com/v1/chat/completions";
  std::string credential_env = "LINA_API_KEY";
  RetryPolicy retry;
  int requests_per_minute = 60;
  // Replay
  std::string fixture_path;
  // Scripted: JSON array of {"tag": ..., "content": ...} entries
  std::string script_path;
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& config);

}  // namespace lina::llm
