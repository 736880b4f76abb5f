#pragma once

#include <fstream>
#include <memory>
#include <mutex>
#include <vector>

#include "lina/llm/types.hpp"

namespace lina::llm {

struct TraceEntry {
  long seq = 0;
  std::string digest;
  ChatRequest request;
  ChatResponse response;
};

// In-order record of every completed call, optionally mirrored to a JSONL
// run log (one record per call: stage tag, step index, role-tagged
// transcript, response). The run log is the audit/trace-export format and
// the input to fixture recording.
class TraceLog {
 public:
  TraceLog() = default;
  explicit TraceLog(const std::string& jsonl_path);

  void append(const ChatRequest& request, const ChatResponse& response);

  std::vector<TraceEntry> entries() const;
  std::size_t size() const;

  static std::vector<TraceEntry> load_jsonl(const std::string& path);

 private:
  mutable std::mutex mutex_;
  std::vector<TraceEntry> entries_;
  std::unique_ptr<std::ofstream> sink_;
};

class TracingProvider : public Provider {
 public:
  TracingProvider(TraceLog& log, Provider& inner) : log_(log), inner_(inner) {}

  ChatResponse complete(const ChatRequest& request) override {
    ChatResponse response = inner_.complete(request);
    log_.append(request, response);
    return response;
  }
  std::string name() const override { return inner_.name(); }

 private:
  TraceLog& log_;
  Provider& inner_;
};

}  // namespace lina::llm
