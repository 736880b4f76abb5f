#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "lina/llm/cache.hpp"
#include "lina/llm/fixture.hpp"
#include "lina/llm/live.hpp"
#include "lina/llm/provider.hpp"
#include "lina/llm/scripted.hpp"
#include "lina/llm/trace.hpp"

using namespace lina::llm;
namespace fs = std::filesystem;

namespace {

ChatRequest simple_request(const std::string& text, double temperature = 0.3, int sample_index = 0) {
  ChatRequest req;
  req.model = "gpt-4o";
  req.messages = {{"user", text}};
  req.temperature = temperature;
  req.sample_index = sample_index;
  req.tag = "test";
  return req;
}

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("lina_test_" + std::to_string(counter_++))) {
    fs::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

class FakeClock : public Clock {
 public:
  std::chrono::milliseconds now() override { return now_; }
  void sleep_for(std::chrono::milliseconds d) override {
    sleeps.push_back(d);
    now_ += d;
  }
  void advance(std::chrono::milliseconds d) { now_ += d; }
  std::vector<std::chrono::milliseconds> sleeps;

 private:
  std::chrono::milliseconds now_{0};
};

class FakeTransport : public HttpTransport {
 public:
  Result post(const std::string&, const std::map<std::string, std::string>&, const std::string&) override {
    ++calls;
    if (results.empty()) throw TransportError("no scripted transport result");
    Result r = results.front();
    results.erase(results.begin());
    return r;
  }
  std::vector<Result> results;
  int calls = 0;
};

std::string chat_body(const std::string& content) {
  const nlohmann::json j = {
      {"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}},
      {"usage", {{"prompt_tokens", 12}, {"completion_tokens", 3}}},
  };
  return j.dump();
}

}  // namespace

TEST(CacheKey, StableAndCanonical) {
  const auto k1 = cache_key(simple_request("hello"));
  const auto k2 = cache_key(simple_request("hello"));
  EXPECT_EQ(k1, k2);
  EXPECT_EQ(k1.size(), 64u);
  // Tag and step are excluded from the key.
  ChatRequest req = simple_request("hello");
  req.tag = "other";
  req.step = 9;
  EXPECT_EQ(cache_key(req), k1);
}

TEST(CacheKey, TemperatureAndSampleIndexAreSignificant) {
  const auto base = cache_key(simple_request("hello", 0.3, 0));
  EXPECT_NE(cache_key(simple_request("hello", 1.0, 0)), base);
  // CoT-SC style: ten samples at temperature 1.0 are ten distinct keys.
  std::set<std::string> keys;
  for (int i = 0; i < 10; ++i) keys.insert(cache_key(simple_request("hello", 1.0, i)));
  EXPECT_EQ(keys.size(), 10u);
}

TEST(Scripted, ServesQueueInOrder) {
  ScriptedProvider p;
  p.push("yes");
  p.push("no");
  EXPECT_EQ(p.complete(simple_request("a")).content, "yes");
  EXPECT_EQ(p.complete(simple_request("b")).content, "no");
  EXPECT_EQ(p.calls(), 2u);
  EXPECT_THROW(p.complete(simple_request("c")), ScriptUnderflowError);
}

TEST(Scripted, TagMismatchIsHarnessError) {
  ScriptedProvider p;
  p.push_tagged("classify", "x");
  ChatRequest req = simple_request("a");
  req.tag = "translate";
  EXPECT_THROW(p.complete(req), ScriptUnderflowError);
}

TEST(Cache, SecondCallMakesZeroProviderCalls) {
  TempDir dir;
  ResponseCache cache(dir.path());
  ScriptedProvider inner;
  inner.push("answer");
  CachingProvider cached(cache, inner);

  const auto first = cached.complete(simple_request("q"));
  // The scripted queue is now empty, so any further provider call would throw.
  const auto second = cached.complete(simple_request("q"));
  EXPECT_EQ(first.content, second.content);
  EXPECT_EQ(inner.calls(), 1u);
  EXPECT_EQ(cached.hits(), 1u);
}

TEST(Cache, DistinctKeysAreDistinctEntries) {
  TempDir dir;
  ResponseCache cache(dir.path());
  ScriptedProvider inner;
  inner.push("cold");
  inner.push("hot");
  CachingProvider cached(cache, inner);
  EXPECT_EQ(cached.complete(simple_request("q", 0.3)).content, "cold");
  EXPECT_EQ(cached.complete(simple_request("q", 1.0)).content, "hot");
  EXPECT_EQ(inner.calls(), 2u);
}

TEST(Cache, CorruptEntryIsQuarantinedAndRefetched) {
  TempDir dir;
  ResponseCache cache(dir.path());
  const auto req = simple_request("q");
  const std::string key = cache_key(req);
  {
    ScriptedProvider inner;
    inner.push("good");
    CachingProvider cached(cache, inner);
    cached.complete(req);
  }
  // Truncate the entry to invalid JSON.
  std::ofstream(dir.path() / (key + ".json")) << "{ not json";
  ScriptedProvider inner;
  inner.push("refetched");
  CachingProvider cached(cache, inner);
  EXPECT_EQ(cached.complete(req).content, "refetched");
  EXPECT_TRUE(fs::exists(dir.path() / (key + ".json.corrupt")));
}

TEST(Cache, DigestMismatchNeverServed) {
  TempDir dir;
  ResponseCache cache(dir.path());
  const auto req = simple_request("q");
  const auto other = simple_request("other");
  const std::string key = cache_key(req);
  {
    ScriptedProvider inner;
    inner.push("other answer");
    CachingProvider cached(cache, inner);
    cached.complete(other);
  }
  // Copy the other entry over this request's slot; its embedded digest
  // will not match and the entry must be rejected.
  fs::copy_file(dir.path() / (cache_key(other) + ".json"), dir.path() / (key + ".json"));
  EXPECT_FALSE(cache.lookup(key).has_value());
}

TEST(Fixture, RecordThenReplayServesSameContent) {
  TempDir dir;
  const fs::path fixture = dir.path() / "run.fixture";
  TraceLog log;
  {
    ScriptedProvider inner;
    inner.push("one");
    inner.push("two");
    TracingProvider traced(log, inner);
    traced.complete(simple_request("first"));
    traced.complete(simple_request("second"));
    write_fixture(log.entries(), fixture.string());
  }
  ReplayProvider replay(fixture.string());
  EXPECT_EQ(replay.size(), 2u);
  EXPECT_EQ(replay.complete(simple_request("first")).content, "one");
  EXPECT_EQ(replay.complete(simple_request("second")).content, "two");
  try {
    replay.complete(simple_request("third"));
    FAIL() << "expected FixtureMissError";
  } catch (const FixtureMissError& e) {
    EXPECT_EQ(e.digest, cache_key(simple_request("third")));
    EXPECT_EQ(e.tag, "test");
  }
  EXPECT_FALSE(fixture_digest(fixture.string()).empty());
}

TEST(Fixture, ConflictingDuplicateDigestsThrow) {
  TraceLog log;
  ScriptedProvider inner;
  inner.push("a");
  inner.push("b");
  TracingProvider traced(log, inner);
  traced.complete(simple_request("same"));
  traced.complete(simple_request("same"));
  EXPECT_THROW(write_fixture(log.entries(), "/tmp/never_written.fixture"), std::runtime_error);
}

TEST(TraceLog, JsonlRoundTrip) {
  TempDir dir;
  const fs::path path = dir.path() / "run.jsonl";
  {
    TraceLog log(path.string());
    ScriptedProvider inner;
    inner.push("hello");
    TracingProvider traced(log, inner);
    ChatRequest req = simple_request("question");
    req.tag = "deduce";
    req.step = 2;
    traced.complete(req);
  }
  const auto entries = TraceLog::load_jsonl(path.string());
  ASSERT_EQ(entries.size(), 1u);
  EXPECT_EQ(entries[0].request.tag, "deduce");
  EXPECT_EQ(entries[0].request.step, 2);
  EXPECT_EQ(entries[0].response.content, "hello");
  EXPECT_EQ(entries[0].digest, cache_key(entries[0].request));
}

TEST(Live, RetriesTransientStatusesWithBackoff) {
  FakeClock clock;
  auto transport = std::make_unique<FakeTransport>();
  auto* t = transport.get();
  t->results = {{429, "slow down"}, {429, "slow down"}, {200, chat_body("ok")}};
  LiveConfig config;
  config.endpoint = "https://example.test/v1/chat/completions";
  config.credential_env = "LINA_TEST_KEY";
  config.retry.base_backoff = std::chrono::milliseconds(100);
  setenv("LINA_TEST_KEY", "k", 1);
  LiveProvider live(config, clock, std::move(transport));

  const auto response = live.complete(simple_request("q"));
  EXPECT_EQ(response.content, "ok");
  EXPECT_EQ(response.usage.prompt, 12);
  EXPECT_EQ(t->calls, 3);
  // Two backoff sleeps: 100ms then 200ms.
  ASSERT_EQ(clock.sleeps.size(), 2u);
  EXPECT_EQ(clock.sleeps[0].count(), 100);
  EXPECT_EQ(clock.sleeps[1].count(), 200);
}

TEST(Live, HardErrorDoesNotRetry) {
  FakeClock clock;
  auto transport = std::make_unique<FakeTransport>();
  auto* t = transport.get();
  t->results = {{401, "bad key"}};
  LiveConfig config;
  config.endpoint = "https://example.test/v1/chat/completions";
  config.credential_env = "LINA_TEST_KEY";
  setenv("LINA_TEST_KEY", "k", 1);
  LiveProvider live(config, clock, std::move(transport));
  EXPECT_THROW(live.complete(simple_request("q")), TransportError);
  EXPECT_EQ(t->calls, 1);
}

TEST(Live, ExhaustedRetriesThrow) {
  FakeClock clock;
  auto transport = std::make_unique<FakeTransport>();
  transport->results = {{500, "a"}, {500, "b"}, {500, "c"}, {500, "d"}};
  LiveConfig config;
  config.endpoint = "https://example.test/v1/chat/completions";
  config.credential_env = "LINA_TEST_KEY";
  config.retry.max_attempts = 4;
  setenv("LINA_TEST_KEY", "k", 1);
  LiveProvider live(config, clock, std::move(transport));
  EXPECT_THROW(live.complete(simple_request("q")), TransportError);
}

TEST(RateLimit, NeverExceedsRequestsPerMinute) {
  FakeClock clock;
  RateLimiter limiter(3, clock);
  std::vector<std::chrono::milliseconds> stamps;
  for (int i = 0; i < 7; ++i) {
    limiter.acquire();
    stamps.push_back(clock.now());
    clock.advance(std::chrono::milliseconds(10));
  }
  // Count acquisitions inside any trailing 60s window.
  for (std::size_t i = 0; i < stamps.size(); ++i) {
    int in_window = 0;
    for (std::size_t j = 0; j <= i; ++j) {
      if (stamps[i] - stamps[j] < std::chrono::milliseconds(60000)) ++in_window;
    }
    EXPECT_LE(in_window, 3);
  }
  EXPECT_FALSE(clock.sleeps.empty());
}

TEST(ProviderFactory, BuildsEachBackend) {
  EXPECT_EQ(backend_from_string("live"), Backend::Live);
  EXPECT_THROW(backend_from_string("bogus"), std::invalid_argument);

  ProviderConfig scripted;
  scripted.backend = Backend::Scripted;
  EXPECT_EQ(make_provider(scripted)->name(), "scripted");

  ProviderConfig replay;
  replay.backend = Backend::Replay;
  EXPECT_THROW(make_provider(replay), std::invalid_argument);
}
