#include "lina/llm/scripted.hpp"

namespace lina::llm {

void ScriptedProvider::push(std::string content) {
  std::lock_guard lock(mutex_);
  queue_.push_back({"", std::move(content)});
}

void ScriptedProvider::push_tagged(std::string expected_tag, std::string content) {
  std::lock_guard lock(mutex_);
  queue_.push_back({std::move(expected_tag), std::move(content)});
}

ChatResponse ScriptedProvider::complete(const ChatRequest& request) {
  std::lock_guard lock(mutex_);
  if (queue_.empty()) {
    throw ScriptUnderflowError("scripted provider queue is empty (stage '" + request.tag + "')");
  }
  Entry entry = std::move(queue_.front());
  queue_.pop_front();
  ++calls_;
  if (!entry.expected_tag.empty() && entry.expected_tag != request.tag) {
    throw ScriptUnderflowError("scripted entry expected stage '" + entry.expected_tag + "' but got '" +
                               request.tag + "'");
  }
  ChatResponse response;
  response.content = std::move(entry.content);
  // Deterministic synthetic accounting so fixtures and reports replay
  // byte-identically.
  long prompt_chars = 0;
  for (const auto& m : request.messages) prompt_chars += static_cast<long>(m.content.size());
  response.usage.prompt = prompt_chars / 4;
  response.usage.completion = static_cast<long>(response.content.size()) / 4;
  response.latency = std::chrono::milliseconds(0);
  response.provider = name();
  return response;
}

std::size_t ScriptedProvider::calls() const {
  std::lock_guard lock(mutex_);
  return calls_;
}

std::size_t ScriptedProvider::remaining() const {
  std::lock_guard lock(mutex_);
  return queue_.size();
}

}  // namespace lina::llm
