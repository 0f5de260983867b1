#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "passflow/compile.hpp"
#include "passflow/runtime/runtime.hpp"

namespace passflow::engine {

/// Answers tasks whose subject and state match (by id or label). `repeat`
/// counts how many tasks the rule may answer; 0 means any number.
struct ScriptRule {
  std::string subject;
  std::string state;
  std::string choice;
  runtime::Json values = runtime::Json::object();
  unsigned repeat = 1;
  std::int64_t delayMs = 0;
};

struct InteractionScript {
  std::vector<ScriptRule> rules;

  /// JSON form: {"rules": [{"subject", "state", "choice", "values",
  /// "repeat", "delayMs"}]}. Throws Error{DecodeError}.
  static InteractionScript parse(std::string_view json);
};

struct RunOptions {
  runtime::SchedulePolicy policy = runtime::SchedulePolicy::Seeded;
  std::uint64_t seed = 0;
  double timeScale = 1.0;
  std::string instanceId = "run";
  std::string instanceName = "scripted run";
  /// Script actions answered before giving up on a looping model.
  std::size_t maxActions = 10'000;
};

enum class RunOutcome { Completed, Stalled };
std::string_view to_string(RunOutcome outcome);

struct RunResult {
  RunOutcome outcome = RunOutcome::Completed;
  std::vector<runtime::TraceEvent> trace;
  std::vector<runtime::InteractionRequest> pending;  // tasks left when stalled
  std::int64_t endTime = 0;                          // virtual ms
  std::string reason;

  std::string trace_jsonl() const { return runtime::TraceLog::to_jsonl(trace); }
  runtime::Json pending_json() const;
};

/// Runs one instance to completion on a virtual clock, answering tasks from
/// the script. Timers due at the same instant as a scripted answer fire
/// first. Identical inputs give identical traces.
RunResult run_scripted(std::shared_ptr<const compile::CompiledModel> model, const InteractionScript& script,
                       const RunOptions& options = {});

}  // namespace passflow::engine
