#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "medaide/gateway/chat.hpp"

namespace medaide::gateway {

enum class CassetteMode { kRecord, kReplay, kPassthrough };

CassetteMode parse_cassette_mode(std::string_view name);

struct CassetteRecord {
  std::string hash;
  Json request;  // canonical form
  ChatReply reply;
};

// Recorded request/reply table keyed by canonical request hash. When a path
// is set, record mode appends each new record to it as one JSONL line.
class Cassette {
 public:
  Cassette() = default;
  static std::shared_ptr<Cassette> load(const std::filesystem::path& path);
  static std::shared_ptr<Cassette> open_for_record(const std::filesystem::path& path);

  std::optional<ChatReply> lookup(const std::string& hash) const;
  void append(const ChatRequest& request, const ChatReply& reply);
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, CassetteRecord> records_;
  std::optional<std::filesystem::path> sink_;
};

// Replay never touches `inner` (it may be null); record and passthrough
// forward to it.
class CassetteChatBackend final : public ChatBackend {
 public:
  CassetteChatBackend(CassetteMode mode, std::shared_ptr<Cassette> cassette, std::shared_ptr<ChatBackend> inner);

  ChatReply chat(const ChatRequest& request) override;
  std::string id() const override;

 private:
  CassetteMode mode_;
  std::shared_ptr<Cassette> cassette_;
  std::shared_ptr<ChatBackend> inner_;
};

}  // namespace medaide::gateway
