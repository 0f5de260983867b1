#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace passflow::runtime {

/// One observable step of an execution. `t` is virtual milliseconds.
struct TraceEvent {
  std::uint64_t seq = 0;
  std::int64_t t = 0;
  std::string instance;
  std::string subject;
  std::string actor;
  std::string event;
  nlohmann::ordered_json detail = nlohmann::ordered_json::object();

  nlohmann::ordered_json to_json() const;
  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

class TraceLog {
 public:
  using Sink = std::function<void(const TraceEvent&)>;

  void record(TraceEvent event);
  void set_sink(Sink sink) { sink_ = std::move(sink); }
  /// Keeping events is the default; the long-running service turns it off
  /// and relies on the sink alone.
  void set_retain(bool retain) { retain_ = retain; }

  const std::vector<TraceEvent>& events() const { return events_; }
  std::vector<TraceEvent> for_instance(const std::string& instanceId) const;
  void clear() { events_.clear(); }

  /// One JSON object per line, in sequence order.
  static std::string to_jsonl(const std::vector<TraceEvent>& events);

 private:
  std::vector<TraceEvent> events_;
  Sink sink_;
  std::uint64_t next_seq_ = 0;
  bool retain_ = true;
};

}  // namespace passflow::runtime
