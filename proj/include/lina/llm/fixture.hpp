#pragma once

#include <map>

#include "lina/llm/trace.hpp"

namespace lina::llm {

// Replay fixture: a versioned JSONL bundle of (digest → response) pairs
// distilled from a run log. Replaying the same run configuration against
// the fixture reproduces the run with zero network traffic.
inline constexpr int kFixtureVersion = 1;

// Deduplicates by digest; a digest recorded with two different responses
// is an authoring error and throws.
void write_fixture(const std::vector<TraceEntry>& entries, const std::string& path);

std::map<std::string, ChatResponse> load_fixture(const std::string& path);

// SHA-256 of the fixture file bytes, echoed into reports.
std::string fixture_digest(const std::string& path);

class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(const std::string& fixture_path);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "replay"; }

  std::size_t size() const { return responses_.size(); }

 private:
  std::map<std::string, ChatResponse> responses_;
};

}  // namespace lina::llm
