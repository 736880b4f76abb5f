#pragma once

#include <filesystem>
#include <mutex>
#include <optional>

#include "lina/llm/types.hpp"

namespace lina::llm {

// Content-addressed response store: one JSON file per cache key under the
// cache directory. Writes go through a temp file plus rename, so a crashed
// run never leaves a partial entry; corrupt or mismatched entries are
// quarantined and treated as misses.
class ResponseCache {
 public:
  explicit ResponseCache(std::filesystem::path dir);

  std::optional<ChatResponse> lookup(const std::string& key);
  void store(const std::string& key, const ChatRequest& request, const ChatResponse& response);

  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path entry_path(const std::string& key) const;
  void quarantine(const std::string& key);

  std::filesystem::path dir_;
  std::mutex mutex_;
};

// complete() = the cached completion operation: a hit returns the stored
// response with no provider call; a miss delegates and persists.
class CachingProvider : public Provider {
 public:
  CachingProvider(ResponseCache& cache, Provider& inner) : cache_(cache), inner_(inner) {}

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return inner_.name() + "+cache"; }

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }

 private:
  ResponseCache& cache_;
  Provider& inner_;
  std::size_t hits_ = 0;
  std::size_t misses_ = 0;
};

}  // namespace lina::llm
