#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>

#include "lina/llm/types.hpp"

namespace lina::llm {

// Injectable time source so retry backoff and rate limiting are testable
// without real sleeps.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::chrono::milliseconds now() = 0;
  virtual void sleep_for(std::chrono::milliseconds d) = 0;
};

class SystemClock : public Clock {
 public:
  std::chrono::milliseconds now() override;
  void sleep_for(std::chrono::milliseconds d) override;
  static SystemClock& instance();
};

struct RetryPolicy {
  int max_attempts = 4;
  std::chrono::milliseconds base_backoff{500};  // doubled per retry, no jitter
};

// Sliding-window limiter: at most `requests_per_minute` acquisitions per
// trailing 60 s window.
class RateLimiter {
 public:
  RateLimiter(int requests_per_minute, Clock& clock);
  void acquire();

 private:
  int limit_;
  Clock& clock_;
  std::mutex mutex_;
  std::deque<std::chrono::milliseconds> issued_;
};

// Minimal HTTP surface the live backend needs; the real implementation
// wraps cpp-httplib, tests substitute a scripted transport.
class HttpTransport {
 public:
  struct Result {
    int status = 0;
    std::string body;
  };
  virtual ~HttpTransport() = default;
  virtual Result post(const std::string& url, const std::map<std::string, std::string>& headers,
                      const std::string& body) = 0;
};

std::unique_ptr<HttpTransport> make_httplib_transport();

struct LiveConfig {
  std::string endpoint;        // full chat-completions URL
  std::string credential_env;  // environment variable holding the API key
  RetryPolicy retry;
  int requests_per_minute = 60;
};

// OpenAI-compatible chat-completions client with exponential backoff on
// transient failures (timeouts, 429, 5xx) and rate-limit compliance.
class LiveProvider : public Provider {
 public:
  LiveProvider(LiveConfig config, Clock& clock = SystemClock::instance(),
               std::unique_ptr<HttpTransport> transport = nullptr);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "live"; }

 private:
  LiveConfig config_;
  Clock& clock_;
  std::unique_ptr<HttpTransport> transport_;
  RateLimiter limiter_;
};

}  // namespace lina::llm
