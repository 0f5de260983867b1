#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "passflow/compile.hpp"
#include "passflow/runtime/actor_system.hpp"
#include "passflow/runtime/director.hpp"
#include "passflow/runtime/io_actor.hpp"
#include "passflow/runtime/process_actor.hpp"

namespace passflow::runtime {

struct RuntimeOptions {
  SchedulePolicy policy = SchedulePolicy::Seeded;
  std::uint64_t seed = 0;
  /// Multiplies every timer duration; 200.0 / 1209600000 turns P14D into
  /// 200 ms.
  double timeScale = 1.0;
};

struct SubjectStatus {
  std::string subjectId;
  std::string subjectLabel;
  std::string stateId;
  std::string stateLabel;
  bool alive = false;
};

struct InstanceStatus {
  std::string instanceId;
  std::string instanceName;
  std::string modelName;
  bool active = false;
  std::vector<SubjectStatus> subjects;

  Json to_json() const;
};

/// Director, IO actor and process actors on one bus. Not thread-safe;
/// callers serialize access.
class Runtime {
 public:
  explicit Runtime(RuntimeOptions options = {});

  /// Returns the subjects started right away. Throws Error{DuplicateInstance},
  /// Error{NoStartSubject} or Error{PlacementError}.
  std::vector<std::string> start_instance(std::shared_ptr<const compile::CompiledModel> model,
                                          const std::string& instanceId, const std::string& instanceName);
  /// Throws Error{NotFound}.
  void stop_instance(const std::string& instanceId);
  InstanceStatus status(const std::string& instanceId) const;
  bool known(const std::string& instanceId) const { return director_->registry().contains(instanceId); }
  /// True while any actor of the instance is alive.
  bool active(const std::string& instanceId) const;

  std::vector<InteractionRequest> pending(const std::optional<std::string>& instanceId = std::nullopt) const;
  void complete(std::uint64_t requestId, const Json& values, const std::string& choice = {});

  ActorSystem& system() { return system_; }
  const ActorSystem& system() const { return system_; }
  Director& director() { return *director_; }
  IoActor& io() { return *io_; }
  TraceLog& trace() { return system_.trace_log(); }
  double time_scale() const { return options_.timeScale; }

 private:
  RuntimeOptions options_;
  ActorSystem system_;
  Director* director_;
  IoActor* io_;
};

}  // namespace passflow::runtime
