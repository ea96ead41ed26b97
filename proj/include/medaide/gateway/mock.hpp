#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "medaide/gateway/chat.hpp"

namespace medaide::gateway {

// One scripted reply. A rule fires when every needle occurs in the request's
// concatenated message contents; an empty needle list (or "*") matches all.
struct MockRule {
  std::vector<std::string> contains;
  std::string reply;
};

struct MockScript {
  std::vector<MockRule> rules;
  // With echo on, requests no rule matches get a deterministic digest of the
  // last user message instead of ScriptMiss.
  bool echo = false;
  int echo_words = 40;
};

// JSONL: {"contains":[str]|"*", "reply":str} per line, or {"echo":true,
// "echo_words":n} to switch on echo.
MockScript load_mock_script(const std::filesystem::path& path);

class MockChatBackend final : public ChatBackend {
 public:
  explicit MockChatBackend(MockScript script);

  ChatReply chat(const ChatRequest& request) override;
  std::string id() const override { return "mock"; }

  static std::string echo_reply(const ChatRequest& request, int words);

 private:
  MockScript script_;
};

}  // namespace medaide::gateway
