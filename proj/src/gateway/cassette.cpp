#include "medaide/gateway/cassette.hpp"

#include <fstream>

#include "medaide/common/error.hpp"
#include "medaide/common/io.hpp"

namespace medaide::gateway {

CassetteMode parse_cassette_mode(std::string_view name) {
  if (name == "record") return CassetteMode::kRecord;
  if (name == "replay") return CassetteMode::kReplay;
  if (name == "passthrough") return CassetteMode::kPassthrough;
  throw Error(ErrorCode::kConfig, "unknown cassette mode '" + std::string(name) + "'");
}

std::shared_ptr<Cassette> Cassette::load(const std::filesystem::path& path) {
  auto c = std::make_shared<Cassette>();
  for (const auto& rec : io::read_jsonl(path)) {
    CassetteRecord r;
    r.hash = io::require_string(rec, "hash", path.string());
    r.request = rec.value.at("request");
    r.reply = reply_from_json(rec.value.at("reply"));
    c->records_.insert_or_assign(r.hash, std::move(r));
  }
  return c;
}

std::shared_ptr<Cassette> Cassette::open_for_record(const std::filesystem::path& path) {
  auto c = std::filesystem::exists(path) ? load(path) : std::make_shared<Cassette>();
  c->sink_ = path;
  return c;
}

std::optional<ChatReply> Cassette::lookup(const std::string& hash) const {
  std::lock_guard lock(mu_);
  const auto it = records_.find(hash);
  if (it == records_.end()) return std::nullopt;
  return it->second.reply;
}

void Cassette::append(const ChatRequest& request, const ChatReply& reply) {
  CassetteRecord r{request_hash(request), canonical_json(request), reply};
  std::lock_guard lock(mu_);
  if (records_.count(r.hash)) return;
  if (sink_) {
    if (sink_->has_parent_path()) std::filesystem::create_directories(sink_->parent_path());
    std::ofstream out(*sink_, std::ios::app | std::ios::binary);
    if (!out) throw Error(ErrorCode::kIo, "cannot append to cassette " + sink_->string());
    out << Json{{"hash", r.hash}, {"request", r.request}, {"reply", to_json(r.reply)}}.dump() << '\n';
  }
  records_.emplace(r.hash, std::move(r));
}

std::size_t Cassette::size() const {
  std::lock_guard lock(mu_);
  return records_.size();
}

CassetteChatBackend::CassetteChatBackend(CassetteMode mode, std::shared_ptr<Cassette> cassette,
                                         std::shared_ptr<ChatBackend> inner)
    : mode_(mode), cassette_(std::move(cassette)), inner_(std::move(inner)) {
  if (mode_ != CassetteMode::kReplay && !inner_) {
    throw Error(ErrorCode::kConfig, "cassette record/passthrough needs an inner backend");
  }
}

ChatReply CassetteChatBackend::chat(const ChatRequest& request) {
  validate(request);
  switch (mode_) {
    case CassetteMode::kReplay: {
      const auto hash = request_hash(request);
      if (auto hit = cassette_->lookup(hash)) return *hit;
      throw Error(ErrorCode::kReplayMiss, hash + " " + canonical_string(request));
    }
    case CassetteMode::kRecord: {
      const auto hash = request_hash(request);
      if (auto hit = cassette_->lookup(hash)) return *hit;
      auto reply = inner_->chat(request);
      cassette_->append(request, reply);
      return reply;
    }
    case CassetteMode::kPassthrough:
      return inner_->chat(request);
  }
  throw Error(ErrorCode::kInvalidArgument, "bad cassette mode");
}

std::string CassetteChatBackend::id() const {
  switch (mode_) {
    case CassetteMode::kReplay: return "replay";
    case CassetteMode::kRecord: return "record:" + inner_->id();
    case CassetteMode::kPassthrough: return inner_->id();
  }
  return "cassette";
}

}  // namespace medaide::gateway
