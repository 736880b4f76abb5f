#include "lina/llm/provider.hpp"

#include <fstream>

#include "lina/llm/fixture.hpp"
#include "lina/llm/scripted.hpp"

namespace lina::llm {

Backend backend_from_string(const std::string& s) {
  if (s == "live") return Backend::Live;
  if (s == "replay") return Backend::Replay;
  if (s == "scripted") return Backend::Scripted;
  throw std::invalid_argument("unknown backend '" + s + "' (expected live, replay, or scripted)");
}

const char* to_string(Backend b) {
  switch (b) {
    case Backend::Live: return "live";
    case Backend::Replay: return "replay";
    case Backend::Scripted: return "scripted";
  }
  return "?";
}

std::unique_ptr<Provider> make_provider(const ProviderConfig& config) {
  switch (config.backend) {
    case Backend::Live: {
      LiveConfig live;
      live.endpoint = config.endpoint;
      live.credential_env = config.credential_env;
      live.retry = config.retry;
      live.requests_per_minute = config.requests_per_minute;
      return std::make_unique<LiveProvider>(std::move(live));
    }
    case Backend::Replay:
      if (config.fixture_path.empty()) {
        throw std::invalid_argument("replay backend requires a fixture path");
      }
      return std::make_unique<ReplayProvider>(config.fixture_path);
    case Backend::Scripted: {
      auto scripted = std::make_unique<ScriptedProvider>();
      if (!config.script_path.empty()) {
        std::ifstream in(config.script_path);
        if (!in) throw std::runtime_error("cannot open script file: " + config.script_path);
        nlohmann::json j;
        in >> j;
        for (const auto& entry : j) {
          scripted->push_tagged(entry.value("tag", ""), entry.at("content").get<std::string>());
        }
      }
      return scripted;
    }
  }
  throw std::logic_error("unreachable backend");
}

}  // namespace lina::llm
