#include "lina/llm/cache.hpp"

#include <fstream>
#include <random>

namespace lina::llm {

namespace fs = std::filesystem;

ResponseCache::ResponseCache(fs::path dir) : dir_(std::move(dir)) {
  fs::create_directories(dir_);
}

fs::path ResponseCache::entry_path(const std::string& key) const {
  return dir_ / (key + ".json");
}

void ResponseCache::quarantine(const std::string& key) {
  std::error_code ec;
  fs::rename(entry_path(key), dir_ / (key + ".json.corrupt"), ec);
  if (ec) fs::remove(entry_path(key), ec);
}

std::optional<ChatResponse> ResponseCache::lookup(const std::string& key) {
  std::lock_guard lock(mutex_);
  const fs::path path = entry_path(key);
  std::ifstream in(path);
  if (!in) return std::nullopt;
  try {
    nlohmann::json j;
    in >> j;
    if (j.at("digest").get<std::string>() != key) {
      throw std::runtime_error("digest mismatch");
    }
    return response_from_json(j.at("response"));
  } catch (const std::exception&) {
    quarantine(key);
    return std::nullopt;
  }
}

void ResponseCache::store(const std::string& key, const ChatRequest& request, const ChatResponse& response) {
  std::lock_guard lock(mutex_);
  const nlohmann::json j = {
      {"cache_version", 1},
      {"digest", key},
      {"request", request_to_json(request)},
      {"response", response_to_json(response)},
  };
  static std::mt19937_64 suffix_rng(std::random_device{}());
  const fs::path tmp = dir_ / (key + ".tmp" + std::to_string(suffix_rng()));
  {
    std::ofstream out(tmp);
    out << j.dump(2) << '\n';
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw std::runtime_error("cache write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, entry_path(key));
}

ChatResponse CachingProvider::complete(const ChatRequest& request) {
  const std::string key = cache_key(request);
  if (auto hit = cache_.lookup(key)) {
    ++hits_;
    return *hit;
  }
  ++misses_;
  ChatResponse response = inner_.complete(request);
  cache_.store(key, request, response);
  return response;
}

}  // namespace lina::llm
