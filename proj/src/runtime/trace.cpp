#include "passflow/runtime/trace.hpp"

namespace passflow::runtime {

nlohmann::ordered_json TraceEvent::to_json() const {
  nlohmann::ordered_json j;
  j["seq"] = seq;
  j["t"] = t;
  j["instance"] = instance;
  j["subject"] = subject;
  j["actor"] = actor;
  j["event"] = event;
  j["detail"] = detail;
  return j;
}

void TraceLog::record(TraceEvent event) {
  event.seq = next_seq_++;
  if (sink_) sink_(event);
  if (retain_) events_.push_back(std::move(event));
}

std::vector<TraceEvent> TraceLog::for_instance(const std::string& instanceId) const {
  std::vector<TraceEvent> out;
  for (const auto& e : events_) {
    if (e.instance == instanceId) out.push_back(e);
  }
  return out;
}

std::string TraceLog::to_jsonl(const std::vector<TraceEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += e.to_json().dump();
    out += '\n';
  }
  return out;
}

}  // namespace passflow::runtime
