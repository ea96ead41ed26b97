#include "medaide/coordinator/trace.hpp"

#include <sstream>

#include "medaide/common/error.hpp"
#include "medaide/common/hash.hpp"
#include "medaide/common/text.hpp"

namespace medaide::coordinator {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kMcCall: return "mc-call";
    case EventKind::kSupporterCall: return "supporter-call";
    case EventKind::kIntegrate: return "integrate";
    case EventKind::kSynthesize: return "synthesize";
  }
  return "?";
}

EventKind parse_event_kind(std::string_view name) {
  for (const auto k : {EventKind::kMcCall, EventKind::kSupporterCall, EventKind::kIntegrate, EventKind::kSynthesize}) {
    if (to_string(k) == name) return k;
  }
  throw Error(ErrorCode::kFormat, "unknown trace event kind '" + std::string(name) + "'");
}

nlohmann::json to_json(const TraceEvent& e) {
  return nlohmann::json{{"seq", e.seq},
                        {"session", e.session},
                        {"stage", e.stage},
                        {"kind", std::string(to_string(e.kind))},
                        {"agent", e.agent},
                        {"request_hash", e.request_hash},
                        {"response_hash", e.response_hash}};
}

TraceEvent event_from_json(const nlohmann::json& j) {
  TraceEvent e;
  e.seq = j.at("seq").get<std::uint64_t>();
  e.session = j.at("session").get<std::string>();
  e.stage = j.at("stage").get<std::string>();
  e.kind = parse_event_kind(j.at("kind").get<std::string>());
  e.agent = j.at("agent").get<std::string>();
  e.request_hash = j.at("request_hash").get<std::string>();
  e.response_hash = j.at("response_hash").get<std::string>();
  return e;
}

std::uint64_t TraceLog::append(TraceEvent event) {
  std::lock_guard lock(mu_);
  event.seq = next_++;
  events_.push_back(std::move(event));
  return events_.back().seq;
}

std::vector<TraceEvent> TraceLog::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

std::vector<TraceEvent> TraceLog::session(std::string_view session_id) const {
  std::lock_guard lock(mu_);
  std::vector<TraceEvent> out;
  for (const auto& e : events_) {
    if (e.session == session_id) out.push_back(e);
  }
  return out;
}

std::size_t TraceLog::size() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

std::string to_jsonl(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const auto& e : events) out += to_json(e).dump() + "\n";
  return out;
}

std::vector<TraceEvent> parse_trace_jsonl(std::string_view text) {
  std::vector<TraceEvent> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (text::trim(line).empty()) continue;
    try {
      out.push_back(event_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kFormat, "trace line " + std::to_string(number) + ": " + e.what());
    }
  }
  return out;
}

std::string trace_hash(const std::vector<TraceEvent>& events) {
  std::string blob;
  for (auto e : events) {
    e.session.clear();
    e.seq = 0;
    blob += to_json(e).dump() + "\n";
  }
  return sha256_hex(blob);
}

std::optional<std::string> check_trace(const std::vector<TraceEvent>& events, std::size_t agent_count) {
  if (agent_count == 0) return "agent count must be positive";
  if (events.empty()) return "empty trace";
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].seq <= events[i - 1].seq) return "sequence numbers not increasing at event " + std::to_string(i);
    if (events[i].session != events[0].session) return "mixed sessions at event " + std::to_string(i);
  }
  const auto at = [&](std::size_t i) { return "event " + std::to_string(i) + " (" + std::string(to_string(events[i].kind)) + ")"; };
  std::size_t i = 0;
  std::size_t groups = 0;
  while (i < events.size() && events[i].kind != EventKind::kSynthesize) {
    if (events[i].kind != EventKind::kMcCall) return at(i) + ": expected mc-call";
    const auto& stage = events[i].stage;
    ++i;
    for (std::size_t s = 0; s + 1 < agent_count; ++s, ++i) {
      if (i >= events.size() || events[i].kind != EventKind::kSupporterCall) {
        return (i < events.size() ? at(i) : std::string("end of trace")) + ": expected supporter-call";
      }
      if (events[i].stage != stage) return at(i) + ": stage changed inside a group";
    }
    if (i >= events.size() || events[i].kind != EventKind::kIntegrate) {
      return (i < events.size() ? at(i) : std::string("end of trace")) + ": expected integrate";
    }
    if (events[i].stage != stage) return at(i) + ": stage changed inside a group";
    ++i;
    ++groups;
  }
  if (groups == 0) return "no stage executed";
  if (i >= events.size()) return "missing synthesize";
  if (i + 1 != events.size()) return at(i + 1) + ": events after synthesize";
  return std::nullopt;
}

}  // namespace medaide::coordinator
