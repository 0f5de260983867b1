#include "passflow/engine/scripted.hpp"

#include <limits>
#include <map>
#include <set>

#include "passflow/error.hpp"

namespace passflow::engine {

using runtime::Json;

InteractionScript InteractionScript::parse(std::string_view text) {
  InteractionScript script;
  try {
    auto j = Json::parse(text);
    for (const auto& r : j.at("rules")) {
      ScriptRule rule;
      rule.subject = r.value("subject", "");
      rule.state = r.value("state", "");
      rule.choice = r.value("choice", "");
      rule.values = r.value("values", Json::object());
      rule.repeat = r.value("repeat", 1u);
      rule.delayMs = r.value("delayMs", std::int64_t{0});
      if (rule.subject.empty() || rule.state.empty()) {
        throw Error(Errc::DecodeError, "script rules need a subject and a state");
      }
      if (!rule.values.is_object()) throw Error(Errc::DecodeError, "script rule values must be an object");
      if (rule.delayMs < 0) throw Error(Errc::DecodeError, "script rule delayMs must not be negative");
      script.rules.push_back(std::move(rule));
    }
  } catch (const Json::exception& e) {
    throw Error(Errc::DecodeError, std::string("malformed script: ") + e.what());
  }
  return script;
}

std::string_view to_string(RunOutcome outcome) { return outcome == RunOutcome::Completed ? "completed" : "stalled"; }

Json RunResult::pending_json() const {
  Json out = Json::array();
  for (const auto& r : pending) out.push_back(r.to_json());
  return out;
}

namespace {

bool matches(const ScriptRule& rule, const runtime::InteractionRequest& r) {
  const auto& c = r.context;
  return (rule.subject == c.subjectId || rule.subject == c.subjectLabel) &&
         (rule.state == c.stateId || rule.state == c.stateLabel);
}

struct Answer {
  std::int64_t due;
  std::uint64_t requestId;
  const ScriptRule* rule;
};

}  // namespace

RunResult run_scripted(std::shared_ptr<const compile::CompiledModel> model, const InteractionScript& script,
                       const RunOptions& options) {
  runtime::Runtime rt({options.policy, options.seed, options.timeScale});
  auto& sys = rt.system();
  rt.start_instance(std::move(model), options.instanceId, options.instanceName);

  std::vector<unsigned> used(script.rules.size(), 0);
  std::set<std::uint64_t> answered;
  std::multimap<std::pair<std::int64_t, std::uint64_t>, Answer> agenda;  // (due, requestId)
  std::size_t actions = 0;
  RunResult result;

  for (;;) {
    sys.run_until_idle();
    if (!rt.active(options.instanceId)) {
      result.outcome = RunOutcome::Completed;
      break;
    }
    for (const auto& r : rt.pending(options.instanceId)) {
      if (answered.contains(r.requestId)) continue;
      for (std::size_t i = 0; i < script.rules.size(); ++i) {
        const auto& rule = script.rules[i];
        if ((rule.repeat == 0 || used[i] < rule.repeat) && matches(rule, r)) {
          ++used[i];
          answered.insert(r.requestId);
          agenda.emplace(std::pair(sys.now() + rule.delayMs, r.requestId), Answer{sys.now() + rule.delayMs, r.requestId, &rule});
          break;
        }
      }
    }
    auto timer = sys.next_timer_due();
    std::int64_t answerDue = agenda.empty() ? std::numeric_limits<std::int64_t>::max() : agenda.begin()->second.due;
    if (timer && *timer <= answerDue) {
      sys.advance_to(*timer);
      continue;
    }
    if (agenda.empty()) {
      result.outcome = RunOutcome::Stalled;
      result.reason = rt.pending(options.instanceId).empty() ? "no pending tasks, timers or messages"
                                                             : "pending tasks have no matching script rule";
      result.pending = rt.pending(options.instanceId);
      break;
    }
    if (++actions > options.maxActions) {
      result.outcome = RunOutcome::Stalled;
      result.reason = "script action limit reached";
      result.pending = rt.pending(options.instanceId);
      break;
    }
    Answer answer = agenda.begin()->second;
    agenda.erase(agenda.begin());
    sys.advance_to(answer.due);
    // The task may have been withdrawn meanwhile (timer, exit).
    bool stillPending = false;
    for (const auto& r : rt.pending(options.instanceId)) stillPending |= r.requestId == answer.requestId;
    if (!stillPending) continue;
    try {
      rt.complete(answer.requestId, answer.rule->values, answer.rule->choice);
    } catch (const Error& e) {
      if (e.code() != Errc::ValidationError) throw;
      result.outcome = RunOutcome::Stalled;
      result.reason = std::string("script answer rejected: ") + e.what();
      result.pending = rt.pending(options.instanceId);
      break;
    }
  }
  result.endTime = sys.now();
  result.trace = rt.trace().for_instance(options.instanceId);
  return result;
}

}  // namespace passflow::engine
