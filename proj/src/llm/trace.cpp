#include "lina/llm/trace.hpp"

namespace lina::llm {

TraceLog::TraceLog(const std::string& jsonl_path) : sink_(std::make_unique<std::ofstream>(jsonl_path)) {
  if (!*sink_) throw std::runtime_error("cannot open run log for writing: " + jsonl_path);
}

void TraceLog::append(const ChatRequest& request, const ChatResponse& response) {
  std::lock_guard lock(mutex_);
  TraceEntry entry;
  entry.seq = static_cast<long>(entries_.size()) + 1;
  entry.digest = cache_key(request);
  entry.request = request;
  entry.response = response;
  if (sink_) {
    const nlohmann::json j = {
        {"seq", entry.seq},
        {"digest", entry.digest},
        {"request", request_to_json(request)},
        {"response", response_to_json(response)},
    };
    *sink_ << j.dump() << '\n';
    sink_->flush();
  }
  entries_.push_back(std::move(entry));
}

std::vector<TraceEntry> TraceLog::entries() const {
  std::lock_guard lock(mutex_);
  return entries_;
}

std::size_t TraceLog::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

std::vector<TraceEntry> TraceLog::load_jsonl(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open run log: " + path);
  std::vector<TraceEntry> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const nlohmann::json j = nlohmann::json::parse(line);
    TraceEntry entry;
    entry.seq = j.at("seq").get<long>();
    entry.digest = j.at("digest").get<std::string>();
    const auto& req = j.at("request");
    entry.request.model = req.at("model").get<std::string>();
    entry.request.temperature = req.at("temperature").get<double>();
    entry.request.tag = req.at("tag").get<std::string>();
    entry.request.step = req.at("step").get<int>();
    entry.request.sample_index = req.at("sample_index").get<int>();
    for (const auto& m : req.at("messages")) {
      entry.request.messages.push_back({m.at("role").get<std::string>(), m.at("content").get<std::string>()});
    }
    if (req.contains("max_tokens")) entry.request.max_tokens = req.at("max_tokens").get<long>();
    entry.response = response_from_json(j.at("response"));
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace lina::llm
