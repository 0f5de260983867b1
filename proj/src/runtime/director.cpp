#include "passflow/runtime/director.hpp"

#include "passflow/runtime/process_actor.hpp"

namespace passflow::runtime {

void Director::prepare(const std::string& instanceId, std::shared_ptr<const compile::CompiledModel> model,
                       InstanceInfo info) {
  registry_.open(instanceId, std::move(info));
  models_[instanceId] = std::move(model);
}

std::shared_ptr<const compile::CompiledModel> Director::model(const std::string& instanceId) const {
  auto it = models_.find(instanceId);
  if (it == models_.end()) throw Error(Errc::NotFound, "no instance '" + instanceId + "'", {instanceId});
  return it->second;
}

void Director::receive(const EngineMessage& m) {
  try {
    switch (m.type) {
      case MessageType::Start: on_start(m); break;
      case MessageType::Register: on_register(m); break;
      case MessageType::Deregister: on_deregister(m); break;
      case MessageType::Stop: on_stop(m); break;
      default: break;
    }
  } catch (const Error& e) {
    system().trace(this, m.instanceId, "", "registrationRejected",
                   {{"error", std::string(to_string(e.code()))}, {"actor", m.sender.to_string()}});
  } catch (const Json::exception& e) {
    system().trace(this, m.instanceId, "", "malformedMessage", {{"type", to_string(m.type)}, {"error", e.what()}});
  }
}

void Director::on_start(const EngineMessage& m) {
  auto model = this->model(m.instanceId);
  const auto& info = registry_.info(m.instanceId);
  for (const auto& [subjectId, program] : model->programs) {
    if (!program.isStartSubject) continue;
    auto& actor = system().spawn<ProcessActor>(program.targetSystem, m.instanceId, model, subjectId, timeScale_);
    system().trace(this, m.instanceId, "", "actorSpawned",
                   {{"subject", subjectId}, {"actor", actor.address().to_string()}});
    Json init{{"director", to_json(address())},
              {"ioActors", Json::array()},
              {"instanceName", info.instanceName},
              {"addressbook", Json::object()}};
    for (const auto& io : registry_.io_actors()) init["ioActors"].push_back(to_json(io));
    send(actor.address(), {MessageType::Init, m.instanceId, {}, std::move(init)});
  }
}

Json Director::addressbook(const std::string& instanceId) const {
  Json entries = Json::object();
  for (const auto& [subject, a] : registry_.entries(instanceId)) entries[subject] = to_json(a);
  Json exited = Json::object();
  for (const auto& [subject, last] : registry_.exited(instanceId)) exited[subject] = last;
  Json io = Json::array();
  for (const auto& a : registry_.io_actors()) io.push_back(to_json(a));
  return {{"entries", entries}, {"exited", exited}, {"ioActors", io}};
}

void Director::broadcast(const std::string& instanceId) {
  Json book = addressbook(instanceId);
  for (const auto& [subject, a] : registry_.entries(instanceId)) {
    send(a, {MessageType::Addressbook, instanceId, {}, book});
  }
}

void Director::on_register(const EngineMessage& m) {
  const std::string subject = m.body.at("subject").get<std::string>();
  auto result = registry_.register_actor(m.instanceId, subject, m.sender);
  switch (result.outcome) {
    case RegisterOutcome::Added:
      broadcast(m.instanceId);
      break;
    case RegisterOutcome::AlreadyRegistered:
      send(m.sender, {MessageType::Addressbook, m.instanceId, {}, addressbook(m.instanceId)});
      break;
    case RegisterOutcome::Duplicate:
      system().trace(this, m.instanceId, subject, "duplicateRejected",
                     {{"actor", m.sender.to_string()}, {"winner", result.winner.to_string()}});
      send(m.sender, {MessageType::Addressbook, m.instanceId, {}, addressbook(m.instanceId)});
      send(m.sender, {MessageType::Exit,
                      m.instanceId,
                      {},
                      {{"reason", "duplicate"}, {"recursive", false}, {"forwardTo", to_json(result.winner)}}});
      break;
    case RegisterOutcome::SubjectExited:
      send(m.sender, {MessageType::Exit, m.instanceId, {}, {{"reason", "subjectExited"}, {"recursive", false}}});
      break;
    case RegisterOutcome::InstanceClosed:
      send(m.sender, {MessageType::Exit, m.instanceId, {}, {{"reason", "stopped"}, {"recursive", false}}});
      break;
  }
}

void Director::on_deregister(const EngineMessage& m) {
  auto instance = registry_.deregister(m.sender, m.body.value("lastState", ""));
  if (instance) broadcast(*instance);
}

void Director::on_stop(const EngineMessage& m) {
  registry_.close(m.instanceId);
  for (const auto& [subject, a] : registry_.entries(m.instanceId)) {
    send(a, {MessageType::Exit, m.instanceId, {}, {{"reason", "stopped"}, {"recursive", false}}});
  }
}

}  // namespace passflow::runtime
