#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace medaide::coordinator {

enum class EventKind { kMcCall, kSupporterCall, kIntegrate, kSynthesize };

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view name);

struct TraceEvent {
  std::string session;
  std::string stage;  // empty for synthesize
  EventKind kind = EventKind::kMcCall;
  std::string agent;
  std::string request_hash;
  std::string response_hash;
  std::uint64_t seq = 0;
};

nlohmann::json to_json(const TraceEvent& e);
TraceEvent event_from_json(const nlohmann::json& j);

// Append-only and shareable between sessions; sequence numbers are global
// and strictly increasing.
class TraceLog {
 public:
  std::uint64_t append(TraceEvent event);

  std::vector<TraceEvent> events() const;
  std::vector<TraceEvent> session(std::string_view session_id) const;
  std::size_t size() const;

 private:
  mutable std::mutex mu_;
  std::vector<TraceEvent> events_;
  std::uint64_t next_ = 1;
};

// One event per line, compact.
std::string to_jsonl(const std::vector<TraceEvent>& events);
std::vector<TraceEvent> parse_trace_jsonl(std::string_view text);

// SHA-256 over the JSONL form with the session ids and sequence numbers
// blanked, so equal conversations hash equally whatever else shared the log.
std::string trace_hash(const std::vector<TraceEvent>& events);

// Checks one session against (mc supporter{n-1} integrate){k} synthesize with
// k >= 1, strictly increasing sequence numbers and a constant stage inside
// each group. Returns the first violation, or nullopt when valid.
std::optional<std::string> check_trace(const std::vector<TraceEvent>& events, std::size_t agent_count);

}  // namespace medaide::coordinator
