#pragma once

#include <string>
#include <vector>

#include "passflow/runtime/trace.hpp"

namespace passflow::testing {

// One line per event: "<subject> <event> <key facts>". Actor addresses and
// times are left out so expectations stay readable.
inline std::string summarize(const runtime::TraceEvent& e) {
  const auto& d = e.detail;
  auto str = [&](const char* key) { return d.contains(key) ? d[key].get<std::string>() : std::string(); };
  std::string s = (e.subject.empty() ? "-" : e.subject) + " " + e.event;
  if (e.event == "stateEntered") {
    s += " " + str("state");
  } else if (e.event == "messageSent") {
    s += " " + str("exchange") + "->" + str("to");
  } else if (e.event == "messageReceived") {
    s += " " + str("exchange");
    if (d.value("fromPool", false)) s += " pool";
  } else if (e.event == "messagePooled") {
    s += " " + str("exchange");
  } else if (e.event == "timerFired") {
    s += " " + str("transition");
  } else if (e.event == "actorExited") {
    s += " " + str("reason") + " " + str("lastState");
    if (!d["poolResidue"].empty()) {
      std::string r;
      for (const auto& x : d["poolResidue"]) r += (r.empty() ? "" : ",") + x.get<std::string>();
      s += " [" + r + "]";
    }
  } else if (e.event == "actorSpawned") {
    s += " " + str("subject");
  } else if (e.event == "taskCreated" || e.event == "taskCancelled") {
    s += " " + str("state");
  } else if (e.event == "taskCompleted") {
    s += " " + str("state") + " " + str("choice");
  } else if (e.event == "messageDropped") {
    s += " " + str("exchange") + " " + str("reason");
  } else if (e.event == "transitionDiscarded") {
    s += " " + str("transition");
  }
  return s;
}

inline std::vector<std::string> summarize(const std::vector<runtime::TraceEvent>& events) {
  std::vector<std::string> out;
  for (const auto& e : events) out.push_back(summarize(e));
  return out;
}

// The events of one subject, in order.
inline std::vector<std::string> project(const std::vector<runtime::TraceEvent>& events, const std::string& subject,
                                        const std::vector<std::string>& kinds = {"stateEntered", "messageSent",
                                                                                 "messageReceived", "timerFired",
                                                                                 "actorExited"}) {
  std::vector<std::string> out;
  for (const auto& e : events) {
    if (e.subject != subject) continue;
    for (const auto& k : kinds) {
      if (e.event == k) {
        auto line = summarize(e);
        // Pooling depends on the schedule; the projection ignores it.
        if (auto p = line.rfind(" pool"); p != std::string::npos && p + 5 == line.size()) line.resize(p);
        out.push_back(line);
        break;
      }
    }
  }
  return out;
}

inline std::size_t count(const std::vector<runtime::TraceEvent>& events, const std::string& event,
                         const std::string& subject = {}) {
  std::size_t n = 0;
  for (const auto& e : events) n += e.event == event && (subject.empty() || e.subject == subject);
  return n;
}

}  // namespace passflow::testing
