#include "passflow/runtime/process_actor.hpp"

#include "passflow/runtime/io_actor.hpp"

namespace passflow::runtime {

using compile::TriggerKind;

Json placeholder(pass::FieldType type) {
  switch (type) {
    case pass::FieldType::Integer: return 0;
    case pass::FieldType::String: return "placeholder";
    case pass::FieldType::Date: return "1970-01-01";
  }
  return nullptr;
}

ProcessActor::ProcessActor(std::shared_ptr<const compile::CompiledModel> model, std::string subjectId,
                           double timeScale)
    : model_(std::move(model)), program_(&model_->programs.at(subjectId)), timeScale_(timeScale) {}

EngineMessage ProcessActor::make(MessageType type, Json body) const {
  return {type, instance_id(), address(), std::move(body)};
}

void ProcessActor::receive(const EngineMessage& m) {
  if (exited_) return;
  try {
    switch (m.type) {
      case MessageType::Init: on_init(m); break;
      case MessageType::Addressbook: on_addressbook(m); break;
      case MessageType::Process: on_process(m); break;
      case MessageType::Transition: on_transition(m); break;
      case MessageType::Wakeup: on_wakeup(m); break;
      case MessageType::IoAck: on_ioack(m); break;
      case MessageType::IoComplete: on_iocomplete(m); break;
      case MessageType::Exit: on_exit(m); break;
      default: break;
    }
  } catch (const Json::exception& e) {
    trace("malformedMessage", {{"type", to_string(m.type)}, {"error", e.what()}});
  }
}

void ProcessActor::on_init(const EngineMessage& m) {
  if (initialized_) return;
  initialized_ = true;
  director_ = address_from_json(m.body.at("director"));
  for (const auto& a : m.body.value("ioActors", Json::array())) ioActors_.push_back(address_from_json(a));
  instanceName_ = m.body.value("instanceName", "");
  const Json book = m.body.value("addressbook", Json::object());
  for (const auto& [subject, a] : book.items()) {
    addressbook_[subject] = address_from_json(a);
  }
  send(director_, make(MessageType::Register, {{"subject", program_->subjectId}}));
}

void ProcessActor::on_addressbook(const EngineMessage& m) {
  addressbook_.clear();
  for (const auto& [subject, a] : m.body.at("entries").items()) addressbook_[subject] = address_from_json(a);
  exitedSubjects_.clear();
  const Json exited = m.body.value("exited", Json::object());
  for (const auto& [subject, _] : exited.items()) exitedSubjects_.insert(subject);
  if (m.body.contains("ioActors")) {
    ioActors_.clear();
    for (const auto& a : m.body["ioActors"]) ioActors_.push_back(address_from_json(a));
  }
  auto self = addressbook_.find(program_->subjectId);
  if (!started_ && self != addressbook_.end() && self->second == address()) {
    started_ = true;
    enter(program_->initialStateId);
  }
}

void ProcessActor::on_process(const EngineMessage& m) {
  Pooled msg{m.body.at("exchangeId").get<std::string>(), m.body.at("senderSubject").get<std::string>(),
             m.body.value("payload", Json::object()), m.sender};
  learned_[msg.senderSubject] = m.sender;
  if (started_ && !transitionPending_) {
    if (const auto* trigger = message_trigger(msg.exchangeId)) {
      consume(msg, false, *trigger);
      return;
    }
  }
  trace("messagePooled", {{"exchange", msg.exchangeId}, {"from", msg.senderSubject}});
  pool_.push_back(std::move(msg));
}

void ProcessActor::on_transition(const EngineMessage& m) {
  auto epoch = m.body.at("epoch").get<std::uint64_t>();
  if (!started_ || !transitionPending_ || epoch != epoch_) {
    trace("transitionDiscarded", {{"transition", m.body.value("transition", "")}, {"state", state_}});
    return;
  }
  enter(m.body.at("target").get<std::string>());
}

void ProcessActor::on_wakeup(const EngineMessage& m) {
  // A stale wakeup: the state it was armed in has already been left.
  if (!timerArmed_ || transitionPending_ || m.body.at("token").get<std::uint64_t>() != timerToken_) return;
  const auto& timeout = *program_->state(state_).timeout;
  trace("timerFired", {{"state", state_}, {"transition", timeout.transitionId}});
  if (interactionOpen_) {
    interactionOpen_ = false;
    for (const auto& io : ioActors_) send(io, make(MessageType::IoCancel, Json::object()));
  }
  request_transition(timeout.targetStateId, timeout.transitionId);
}

void ProcessActor::on_ioack(const EngineMessage& m) {
  // Nothing to do: completions carry the epoch, which is what matters.
  (void)m;
}

void ProcessActor::on_iocomplete(const EngineMessage& m) {
  if (!interactionOpen_ || transitionPending_ || m.body.at("epoch").get<std::uint64_t>() != epoch_) return;
  const auto& st = program_->state(state_);
  std::string choice = m.body.value("choice", "");
  const compile::Trigger* picked = nullptr;
  for (const auto& t : st.triggers) {
    bool match = (t.kind == TriggerKind::UserChoice && t.match == choice) ||
                 (t.kind == TriggerKind::Internal && choice.empty());
    if (match) {
      picked = &t;
      break;
    }
  }
  if (!picked) {
    trace("malformedMessage", {{"type", "iocomplete"}, {"error", "no transition for choice '" + choice + "'"}});
    return;
  }
  interactionOpen_ = false;
  const Json values = m.body.value("values", Json::object());
  for (const auto& [key, value] : values.items()) store_[key] = value;
  request_transition(picked->targetStateId, picked->transitionId);
}

void ProcessActor::on_exit(const EngineMessage& m) {
  std::optional<ActorAddress> forwardTo;
  if (m.body.contains("forwardTo")) forwardTo = address_from_json(m.body["forwardTo"]);
  exit(m.body.value("reason", "exitRequested"), m.body.value("recursive", true), forwardTo);
}

void ProcessActor::enter(const std::string& stateId) {
  const auto& st = program_->state(stateId);
  ++epoch_;
  state_ = stateId;
  transitionPending_ = false;
  timerArmed_ = false;
  interactionOpen_ = false;
  trace("stateEntered", {{"state", st.id}, {"label", st.label}});

  if (std::holds_alternative<compile::ExitEffect>(st.onEnter)) {
    exit("endState", false, std::nullopt);
    return;
  }
  if (const auto* send = std::get_if<compile::SendEffect>(&st.onEnter)) {
    perform_send(*send);
  } else if (const auto* interaction = std::get_if<compile::InteractionEffect>(&st.onEnter)) {
    request_interaction(*interaction);
    arm_timer();
    return;
  } else if (st.kind == pass::StateKind::Receive) {
    if (!consume_from_pool()) arm_timer();
    return;
  }
  for (const auto& t : st.triggers) {
    if (t.kind == TriggerKind::Internal) {
      request_transition(t.targetStateId, t.transitionId);
      return;
    }
  }
  arm_timer();
}

void ProcessActor::arm_timer() {
  const auto& st = program_->state(state_);
  if (!st.timeout) return;
  timerArmed_ = true;
  ++timerToken_;
  auto delay = st.timeout->duration.scaled(timeScale_).value().count();
  system().schedule(address(), delay, make(MessageType::Wakeup, {{"token", timerToken_}}));
}

void ProcessActor::request_transition(const std::string& target, const std::string& transitionId) {
  transitionPending_ = true;
  timerArmed_ = false;
  send(address(), make(MessageType::Transition, {{"epoch", epoch_}, {"target", target}, {"transition", transitionId}}));
}

const compile::Trigger* ProcessActor::message_trigger(const std::string& exchangeId) const {
  for (const auto& t : program_->state(state_).triggers) {
    if (t.kind == TriggerKind::Message && t.match == exchangeId) return &t;
  }
  return nullptr;
}

void ProcessActor::consume(const Pooled& message, bool fromPool, const compile::Trigger& trigger) {
  if (message.payload.is_object()) {
    for (const auto& [key, value] : message.payload.items()) store_[key] = value;
  }
  trace("messageReceived", {{"exchange", message.exchangeId},
                            {"from", message.senderSubject},
                            {"fromPool", fromPool},
                            {"payload", message.payload}});
  request_transition(trigger.targetStateId, trigger.transitionId);
}

bool ProcessActor::consume_from_pool() {
  for (auto it = pool_.begin(); it != pool_.end(); ++it) {
    if (const auto* trigger = message_trigger(it->exchangeId)) {
      Pooled msg = std::move(*it);
      pool_.erase(it);
      consume(msg, true, *trigger);
      return true;
    }
  }
  return false;
}

std::optional<ActorAddress> ProcessActor::resolve(const std::string& subjectId) {
  for (const auto* known : {&addressbook_, &learned_, &spawned_}) {
    if (auto it = known->find(subjectId); it != known->end()) return it->second;
  }
  auto program = model_->programs.find(subjectId);
  if (program == model_->programs.end()) return std::nullopt;
  auto& child = system().spawn<ProcessActor>(program->second.targetSystem, instance_id(), model_, subjectId, timeScale_);
  spawned_[subjectId] = child.address();
  children_.push_back(child.address());
  trace("actorSpawned", {{"subject", subjectId}, {"actor", child.address().to_string()}});
  Json init{{"director", to_json(director_)},
            {"ioActors", Json::array()},
            {"instanceName", instanceName_},
            {"addressbook", addressbook_json()}};
  for (const auto& io : ioActors_) init["ioActors"].push_back(to_json(io));
  send(child.address(), make(MessageType::Init, std::move(init)));
  return child.address();
}

Json ProcessActor::addressbook_json() const {
  Json j = Json::object();
  for (const auto& [subject, a] : addressbook_) j[subject] = to_json(a);
  return j;
}

void ProcessActor::perform_send(const compile::SendEffect& effect) {
  if (exitedSubjects_.contains(effect.recipient)) {
    trace("messageDropped", {{"exchange", effect.exchangeId}, {"to", effect.recipient}, {"reason", "recipientExited"}});
    return;
  }
  std::optional<ActorAddress> to;
  try {
    to = resolve(effect.recipient);
  } catch (const Error& e) {
    if (e.code() != Errc::PlacementError) throw;
    trace("messageDropped", {{"exchange", effect.exchangeId}, {"to", effect.recipient}, {"reason", "placement"}});
    return;
  }
  if (!to) {
    trace("messageDropped", {{"exchange", effect.exchangeId}, {"to", effect.recipient}, {"reason", "unknownSubject"}});
    return;
  }
  Json payload = Json::object();
  for (const auto& f : effect.payloadTemplate) {
    payload[f.name] = store_.contains(f.name) ? store_[f.name] : placeholder(f.fieldType);
  }
  send(*to, make(MessageType::Process,
                 {{"exchangeId", effect.exchangeId}, {"senderSubject", program_->subjectId}, {"payload", payload}}));
  trace("messageSent", {{"exchange", effect.exchangeId}, {"to", effect.recipient}});
}

void ProcessActor::request_interaction(const compile::InteractionEffect& effect) {
  if (ioActors_.empty()) {
    trace("malformedMessage", {{"type", "iorequest"}, {"error", "no IO actor known"}});
    return;
  }
  const auto& st = program_->state(state_);
  InteractionRequest r;
  for (const auto& f : effect.fields) {
    r.fields.push_back({f.field.name, f.field.displayName, f.field.fieldType, f.readOnly,
                        store_.contains(f.field.name) ? store_[f.field.name] : Json()});
  }
  r.choices = effect.choices;
  r.context = {instance_id(), instanceName_, program_->modelName, program_->subjectId, program_->subjectLabel,
               st.id, st.label};
  r.epoch = epoch_;
  interactionOpen_ = true;
  send(ioActors_.front(), make(MessageType::IoRequest, r.to_body()));
}

void ProcessActor::exit(const std::string& reason, bool recursive, std::optional<ActorAddress> forwardTo) {
  exited_ = true;
  if (interactionOpen_) {
    for (const auto& io : ioActors_) send(io, make(MessageType::IoCancel, Json::object()));
  }
  if (forwardTo) {
    for (auto& p : pool_) {
      system().post(*forwardTo, {MessageType::Process,
                                 instance_id(),
                                 p.origin,
                                 {{"exchangeId", p.exchangeId}, {"senderSubject", p.senderSubject}, {"payload", p.payload}}});
    }
    pool_.clear();
  }
  if (initialized_) {
    send(director_, make(MessageType::Deregister,
                         {{"subject", program_->subjectId}, {"lastState", state_}, {"reason", reason}}));
  }
  if (recursive) {
    for (const auto& child : children_) {
      send(child, make(MessageType::Exit, {{"reason", "parentExited"}, {"recursive", true}}));
    }
  }
  Json residue = Json::array();
  for (const auto& p : pool_) residue.push_back(p.exchangeId);
  trace("actorExited", {{"reason", reason}, {"lastState", state_}, {"poolResidue", residue}});
  system().stop(address(), forwardTo);
}

}  // namespace passflow::runtime
