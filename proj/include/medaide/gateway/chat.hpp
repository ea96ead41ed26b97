#pragma once

#include <memory>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace medaide::gateway {

using Json = nlohmann::json;

enum class Role { kSystem, kUser, kAssistant };

std::string_view to_string(Role role);
Role parse_role(std::string_view name);

struct ChatMessage {
  Role role = Role::kUser;
  std::string content;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 512;
};

struct Usage {
  int prompt_tokens = 0;
  int completion_tokens = 0;
  int total_tokens = 0;
};

struct ChatReply {
  std::string content;
  std::string finish_reason = "stop";
  Usage usage;
};

// Messages non-empty and the first non-system message is from the user.
void validate(const ChatRequest& request);

// Sorted keys, compact separators, message contents with whitespace runs
// collapsed. Cassette keys and trace hashes are computed over this.
Json canonical_json(const ChatRequest& request);
std::string canonical_string(const ChatRequest& request);
std::string request_hash(const ChatRequest& request);

Json to_json(const ChatReply& reply);
ChatReply reply_from_json(const Json& j);
ChatRequest request_from_json(const Json& j);

class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatReply chat(const ChatRequest& request) = 0;
  virtual std::string id() const = 0;
};

// Caps the number of in-flight calls to the wrapped backend.
class BoundedChatBackend final : public ChatBackend {
 public:
  BoundedChatBackend(std::shared_ptr<ChatBackend> inner, int parallelism);

  ChatReply chat(const ChatRequest& request) override;
  std::string id() const override { return inner_->id(); }

 private:
  std::shared_ptr<ChatBackend> inner_;
  std::counting_semaphore<1024> slots_;
};

struct ChatSettings {
  std::string model = "medaide-offline";
  double temperature = 0.0;
  int max_tokens = 512;
};

// What the pipeline holds: a backend plus the request defaults. A null
// Gateway pointer anywhere in the pipeline means "deterministic fallback".
class Gateway {
 public:
  Gateway(std::shared_ptr<ChatBackend> backend, ChatSettings settings);

  ChatRequest make_request(std::string_view system, std::string_view user) const;
  ChatReply ask(std::string_view system, std::string_view user) const;
  ChatReply send(const ChatRequest& request) const;

  const ChatSettings& settings() const { return settings_; }
  ChatBackend& backend() const { return *backend_; }

 private:
  std::shared_ptr<ChatBackend> backend_;
  ChatSettings settings_;
};

}  // namespace medaide::gateway
