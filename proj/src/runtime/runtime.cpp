#include "passflow/runtime/runtime.hpp"

namespace passflow::runtime {

Json InstanceStatus::to_json() const {
  Json subs = Json::array();
  for (const auto& s : subjects) {
    subs.push_back({{"subjectId", s.subjectId},
                    {"subjectLabel", s.subjectLabel},
                    {"stateId", s.stateId},
                    {"currentStateLabel", s.stateLabel},
                    {"alive", s.alive}});
  }
  return {{"instanceId", instanceId},
          {"instanceName", instanceName},
          {"modelName", modelName},
          {"active", active},
          {"subjects", subs}};
}

Runtime::Runtime(RuntimeOptions options) : options_(options), system_(options.policy, options.seed) {
  director_ = &system_.spawn<Director>(std::string(kManagementSystem), "", options.timeScale);
  io_ = &system_.spawn<IoActor>(std::string(kManagementSystem), "");
  director_->registry().add_io_actor(io_->address());
}

std::vector<std::string> Runtime::start_instance(std::shared_ptr<const compile::CompiledModel> model,
                                                 const std::string& instanceId, const std::string& instanceName) {
  if (known(instanceId)) {
    throw Error(Errc::DuplicateInstance, "instance '" + instanceId + "' already exists", {instanceId});
  }
  std::vector<std::string> starters;
  std::string modelName;
  for (const auto& [id, program] : model->programs) {
    if (!system_.has_system(program.targetSystem)) {
      throw Error(Errc::PlacementError,
                  "subject '" + id + "' is placed on unknown actor system '" + program.targetSystem + "'",
                  {id, program.targetSystem});
    }
    if (program.isStartSubject) starters.push_back(id);
    modelName = program.modelName;
  }
  if (starters.empty()) throw Error(Errc::NoStartSubject, "model has no start subject");
  director_->prepare(instanceId, std::move(model), {instanceName, modelName});
  system_.post(director_->address(), {MessageType::Start, instanceId, {}, Json::object()});
  return starters;
}

void Runtime::stop_instance(const std::string& instanceId) {
  if (!known(instanceId)) throw Error(Errc::NotFound, "no instance '" + instanceId + "'", {instanceId});
  system_.post(director_->address(), {MessageType::Stop, instanceId, {}, Json::object()});
}

bool Runtime::active(const std::string& instanceId) const { return !system_.live_actors(instanceId).empty(); }

InstanceStatus Runtime::status(const std::string& instanceId) const {
  const auto& registry = director_->registry();
  const auto& info = registry.info(instanceId);
  auto model = director_->model(instanceId);
  InstanceStatus out{instanceId, info.instanceName, info.modelName, active(instanceId), {}};
  auto entries = registry.entries(instanceId);
  auto exited = registry.exited(instanceId);
  for (const auto& [id, program] : model->programs) {
    SubjectStatus s{id, program.subjectLabel, {}, {}, false};
    if (auto it = entries.find(id); it != entries.end()) {
      auto* actor = const_cast<ActorSystem&>(system_).find_as<ProcessActor>(it->second);
      if (actor) {
        s.alive = true;
        s.stateId = actor->current_state();
      }
    } else if (auto ex = exited.find(id); ex != exited.end()) {
      s.stateId = ex->second;
    }
    if (!s.stateId.empty()) s.stateLabel = program.state(s.stateId).label;
    out.subjects.push_back(std::move(s));
  }
  return out;
}

std::vector<InteractionRequest> Runtime::pending(const std::optional<std::string>& instanceId) const {
  return io_->pending(instanceId);
}

void Runtime::complete(std::uint64_t requestId, const Json& values, const std::string& choice) {
  io_->complete(requestId, values, choice);
}

}  // namespace passflow::runtime
