#include "lina/llm/fixture.hpp"

#include <fstream>
#include <sstream>

namespace lina::llm {

void write_fixture(const std::vector<TraceEntry>& entries, const std::string& path) {
  std::map<std::string, const TraceEntry*> by_digest;
  for (const auto& entry : entries) {
    const auto [it, inserted] = by_digest.emplace(entry.digest, &entry);
    if (!inserted && it->second->response.content != entry.response.content) {
      throw std::runtime_error("conflicting responses recorded for digest " + entry.digest);
    }
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open fixture for writing: " + path);
  out << nlohmann::json{{"fixture_version", kFixtureVersion}, {"entries", by_digest.size()}}.dump() << '\n';
  for (const auto& [digest, entry] : by_digest) {
    const nlohmann::json j = {
        {"digest", digest},
        {"tag", entry->request.tag},
        {"response", response_to_json(entry->response)},
    };
    out << j.dump() << '\n';
  }
}

std::map<std::string, ChatResponse> load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open fixture: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("fixture is empty: " + path);
  const nlohmann::json header = nlohmann::json::parse(line);
  if (header.at("fixture_version").get<int>() != kFixtureVersion) {
    throw std::runtime_error("unsupported fixture version in " + path);
  }
  std::map<std::string, ChatResponse> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    ChatResponse response = response_from_json(j.at("response"));
    response.provider = "replay";
    out.emplace(j.at("digest").get<std::string>(), std::move(response));
  }
  return out;
}

std::string fixture_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fixture: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

ReplayProvider::ReplayProvider(const std::string& fixture_path) : responses_(load_fixture(fixture_path)) {}

ChatResponse ReplayProvider::complete(const ChatRequest& request) {
  const std::string digest = cache_key(request);
  const auto it = responses_.find(digest);
  if (it == responses_.end()) {
    throw FixtureMissError(digest, request.tag);
  }
  return it->second;
}

}  // namespace lina::llm
