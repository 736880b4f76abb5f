#pragma once

#include <deque>
#include <mutex>

#include "lina/llm/types.hpp"

namespace lina::llm {

// Test backend serving canned responses in queue order. An entry may pin
// the stage tag it expects, which catches scripted runs drifting out of
// sync with the pipeline's call sequence.
class ScriptedProvider : public Provider {
 public:
  void push(std::string content);
  void push_tagged(std::string expected_tag, std::string content);

  ChatResponse complete(const ChatRequest& request) override;
  std::string name() const override { return "scripted"; }

  std::size_t calls() const;
  std::size_t remaining() const;

 private:
  struct Entry {
    std::string expected_tag;  // empty = any
    std::string content;
  };
  mutable std::mutex mutex_;
  std::deque<Entry> queue_;
  std::size_t calls_ = 0;
};

}  // namespace lina::llm
