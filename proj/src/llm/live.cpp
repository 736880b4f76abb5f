#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "lina/llm/live.hpp"

#include <cstdlib>
#include <thread>

namespace lina::llm {

std::chrono::milliseconds SystemClock::now() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now().time_since_epoch());
}

void SystemClock::sleep_for(std::chrono::milliseconds d) {
  std::this_thread::sleep_for(d);
}

SystemClock& SystemClock::instance() {
  static SystemClock clock;
  return clock;
}

RateLimiter::RateLimiter(int requests_per_minute, Clock& clock) : limit_(requests_per_minute), clock_(clock) {}

void RateLimiter::acquire() {
  using namespace std::chrono_literals;
  std::lock_guard lock(mutex_);
  for (;;) {
    const auto now = clock_.now();
    while (!issued_.empty() && now - issued_.front() >= 60s) issued_.pop_front();
    if (static_cast<int>(issued_.size()) < limit_) {
      issued_.push_back(now);
      return;
    }
    clock_.sleep_for(issued_.front() + std::chrono::milliseconds(60s) - now);
  }
}

namespace {

class HttplibTransport : public HttpTransport {
 public:
  Result post(const std::string& url, const std::map<std::string, std::string>& headers,
              const std::string& body) override {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw TransportError("endpoint URL has no scheme: " + url);
    const std::string rest = url.substr(scheme_end + 3);
    const auto path_start = rest.find('/');
    const std::string host = path_start == std::string::npos ? rest : rest.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : rest.substr(path_start);
    const std::string origin = url.substr(0, scheme_end + 3) + host;

    httplib::Client client(origin);
    client.set_connection_timeout(30);
    client.set_read_timeout(120);
    httplib::Headers h(headers.begin(), headers.end());
    auto res = client.Post(path, h, body, "application/json");
    if (!res) {
      throw TransportError("transport failure: " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
  }
};

bool transient_status(int status) {
  return status == 429 || status >= 500;
}

}  // namespace

std::unique_ptr<HttpTransport> make_httplib_transport() {
  return std::make_unique<HttplibTransport>();
}

LiveProvider::LiveProvider(LiveConfig config, Clock& clock, std::unique_ptr<HttpTransport> transport)
    : config_(std::move(config)),
      clock_(clock),
      transport_(transport ? std::move(transport) : make_httplib_transport()),
      limiter_(config_.requests_per_minute, clock) {}

ChatResponse LiveProvider::complete(const ChatRequest& request) {
  const char* key = config_.credential_env.empty() ? nullptr : std::getenv(config_.credential_env.c_str());
  if (!key || !*key) {
    throw TransportError("credential environment variable is not set: " + config_.credential_env);
  }

  nlohmann::json messages = nlohmann::json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", m.role}, {"content", m.content}});
  }
  nlohmann::json body = {
      {"model", request.model},
      {"messages", std::move(messages)},
      {"temperature", request.temperature},
  };
  if (request.max_tokens) body["max_tokens"] = *request.max_tokens;
  const std::string payload = body.dump();
  const std::map<std::string, std::string> headers = {
      {"Authorization", std::string("Bearer ") + key},
  };

  std::string last_error;
  for (int attempt = 1; attempt <= config_.retry.max_attempts; ++attempt) {
    limiter_.acquire();
    const auto t0 = clock_.now();
    try {
      const auto result = transport_->post(config_.endpoint, headers, payload);
      if (result.status == 200) {
        const nlohmann::json j = nlohmann::json::parse(result.body);
        ChatResponse response;
        response.content = j.at("choices").at(0).at("message").at("content").get<std::string>();
        if (j.contains("usage")) {
          response.usage.prompt = j["usage"].value("prompt_tokens", 0L);
          response.usage.completion = j["usage"].value("completion_tokens", 0L);
        }
        response.latency = clock_.now() - t0;
        response.provider = name();
        return response;
      }
      if (!transient_status(result.status)) {
        throw TransportError("endpoint returned status " + std::to_string(result.status) + ": " + result.body);
      }
      last_error = "status " + std::to_string(result.status);
    } catch (const TransportError& e) {
      if (std::string(e.what()).rfind("endpoint returned status", 0) == 0) throw;
      last_error = e.what();
    }
    if (attempt < config_.retry.max_attempts) {
      clock_.sleep_for(config_.retry.base_backoff * (1L << (attempt - 1)));
    }
  }
  throw TransportError("transport attempts exhausted: " + last_error);
}

}  // namespace lina::llm
