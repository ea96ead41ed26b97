#include "medaide/gateway/mock.hpp"

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"
#include "medaide/common/text.hpp"

namespace medaide::gateway {

MockScript load_mock_script(const std::filesystem::path& path) {
  MockScript script;
  for (const auto& rec : io::read_jsonl(path)) {
    if (rec.value.contains("echo")) {
      script.echo = rec.value.at("echo").get<bool>();
      script.echo_words = rec.value.value("echo_words", script.echo_words);
      continue;
    }
    MockRule rule;
    rule.reply = io::require_string(rec, "reply", path.string());
    const auto it = rec.value.find("contains");
    if (it != rec.value.end()) {
      if (it->is_string()) {
        if (it->get<std::string>() != "*") rule.contains.push_back(it->get<std::string>());
      } else {
        rule.contains = it->get<std::vector<std::string>>();
      }
    }
    script.rules.push_back(std::move(rule));
  }
  return script;
}

MockChatBackend::MockChatBackend(MockScript script) : script_(std::move(script)) {}

ChatReply MockChatBackend::chat(const ChatRequest& request) {
  validate(request);
  std::string haystack;
  for (const auto& m : request.messages) {
    haystack += m.content;
    haystack += '\n';
  }
  for (const auto& rule : script_.rules) {
    bool all = true;
    for (const auto& needle : rule.contains) {
      if (needle == "*") continue;
      if (haystack.find(needle) == std::string::npos) {
        all = false;
        break;
      }
    }
    if (all) return ChatReply{rule.reply, "stop", {}};
  }
  if (script_.echo) return ChatReply{echo_reply(request, script_.echo_words), "stop", {}};
  throw Error(ErrorCode::kScriptMiss, "no scripted reply for request " + request_hash(request).substr(0, 16));
}

std::string MockChatBackend::echo_reply(const ChatRequest& request, int words) {
  std::string last_user;
  for (const auto& m : request.messages) {
    if (m.role == Role::kUser) last_user = m.content;
  }
  auto toks = text::words(last_user);
  if (static_cast<int>(toks.size()) > words) toks.resize(static_cast<std::size_t>(words));
  return "(mock " + request_hash(request).substr(0, 8) + ") " + text::join(toks, " ");
}

}  // namespace medaide::gateway
