#include "medaide/gateway/chat.hpp"

#include "medaide/common/error.hpp"
#include "medaide/common/hash.hpp"
#include "medaide/common/text.hpp"

namespace medaide::gateway {

std::string_view to_string(Role role) {
  switch (role) {
    case Role::kSystem: return "system";
    case Role::kUser: return "user";
    case Role::kAssistant: return "assistant";
  }
  return "user";
}

Role parse_role(std::string_view name) {
  if (name == "system") return Role::kSystem;
  if (name == "user") return Role::kUser;
  if (name == "assistant") return Role::kAssistant;
  throw Error(ErrorCode::kFormat, "unknown chat role '" + std::string(name) + "'");
}

void validate(const ChatRequest& request) {
  if (request.messages.empty()) throw Error(ErrorCode::kInvalidArgument, "chat request has no messages");
  for (const auto& m : request.messages) {
    if (m.role == Role::kSystem) continue;
    if (m.role != Role::kUser) {
      throw Error(ErrorCode::kInvalidArgument, "first non-system message must come from the user");
    }
    return;
  }
  throw Error(ErrorCode::kInvalidArgument, "chat request has no user message");
}

Json canonical_json(const ChatRequest& request) {
  Json messages = Json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", text::collapse_whitespace(m.content)}});
  }
  return Json{{"model", request.model},
              {"messages", std::move(messages)},
              {"temperature", request.temperature},
              {"max_tokens", request.max_tokens}};
}

std::string canonical_string(const ChatRequest& request) { return canonical_json(request).dump(); }

std::string request_hash(const ChatRequest& request) { return sha256_hex(canonical_string(request)); }

Json to_json(const ChatReply& reply) {
  return Json{{"content", reply.content},
              {"finish_reason", reply.finish_reason},
              {"usage",
               {{"prompt_tokens", reply.usage.prompt_tokens},
                {"completion_tokens", reply.usage.completion_tokens},
                {"total_tokens", reply.usage.total_tokens}}}};
}

ChatReply reply_from_json(const Json& j) {
  ChatReply r;
  r.content = j.at("content").get<std::string>();
  r.finish_reason = j.value("finish_reason", std::string("stop"));
  if (const auto u = j.find("usage"); u != j.end() && u->is_object()) {
    r.usage.prompt_tokens = u->value("prompt_tokens", 0);
    r.usage.completion_tokens = u->value("completion_tokens", 0);
    r.usage.total_tokens = u->value("total_tokens", 0);
  }
  return r;
}

ChatRequest request_from_json(const Json& j) {
  ChatRequest r;
  r.model = j.at("model").get<std::string>();
  r.temperature = j.value("temperature", 0.0);
  r.max_tokens = j.value("max_tokens", 512);
  for (const auto& m : j.at("messages")) {
    r.messages.push_back({parse_role(m.at("role").get<std::string>()), m.at("content").get<std::string>()});
  }
  return r;
}

BoundedChatBackend::BoundedChatBackend(std::shared_ptr<ChatBackend> inner, int parallelism)
    : inner_(std::move(inner)), slots_(parallelism < 1 ? 1 : (parallelism > 1024 ? 1024 : parallelism)) {}

ChatReply BoundedChatBackend::chat(const ChatRequest& request) {
  slots_.acquire();
  try {
    auto reply = inner_->chat(request);
    slots_.release();
    return reply;
  } catch (...) {
    slots_.release();
    throw;
  }
}

Gateway::Gateway(std::shared_ptr<ChatBackend> backend, ChatSettings settings)
    : backend_(std::move(backend)), settings_(std::move(settings)) {}

ChatRequest Gateway::make_request(std::string_view system, std::string_view user) const {
  ChatRequest req;
  req.model = settings_.model;
  req.temperature = settings_.temperature;
  req.max_tokens = settings_.max_tokens;
  if (!system.empty()) req.messages.push_back({Role::kSystem, std::string(system)});
  req.messages.push_back({Role::kUser, std::string(user)});
  return req;
}

ChatReply Gateway::ask(std::string_view system, std::string_view user) const {
  return send(make_request(system, user));
}

ChatReply Gateway::send(const ChatRequest& request) const {
  validate(request);
  return backend_->chat(request);
}

}  // namespace medaide::gateway
