#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "passflow/compile.hpp"
#include "passflow/runtime/actor_system.hpp"

namespace passflow::runtime {

/// Interprets one subject's BehaviorProgram inside one instance.
class ProcessActor : public Actor {
 public:
  ProcessActor(std::shared_ptr<const compile::CompiledModel> model, std::string subjectId, double timeScale);

  std::string subject() const override { return program_->subjectId; }
  void receive(const EngineMessage& message) override;

  const compile::BehaviorProgram& program() const { return *program_; }
  bool started() const { return started_; }
  /// Empty until the director has confirmed the registration.
  const std::string& current_state() const { return state_; }
  std::uint64_t epoch() const { return epoch_; }
  std::size_t pool_size() const { return pool_.size(); }
  const Json& store() const { return store_; }
  const std::vector<ActorAddress>& children() const { return children_; }
  const std::map<std::string, ActorAddress>& addressbook() const { return addressbook_; }

 private:
  struct Pooled {
    std::string exchangeId;
    std::string senderSubject;
    Json payload;
    ActorAddress origin;  // only used to forward the pool on duplicate exit
  };

  void on_init(const EngineMessage& m);
  void on_addressbook(const EngineMessage& m);
  void on_process(const EngineMessage& m);
  void on_transition(const EngineMessage& m);
  void on_wakeup(const EngineMessage& m);
  void on_ioack(const EngineMessage& m);
  void on_iocomplete(const EngineMessage& m);
  void on_exit(const EngineMessage& m);

  void enter(const std::string& stateId);
  void arm_timer();
  void request_transition(const std::string& target, const std::string& transitionId);
  const compile::Trigger* message_trigger(const std::string& exchangeId) const;
  void consume(const Pooled& message, bool fromPool, const compile::Trigger& trigger);
  bool consume_from_pool();
  void perform_send(const compile::SendEffect& effect);
  std::optional<ActorAddress> resolve(const std::string& subjectId);
  void request_interaction(const compile::InteractionEffect& effect);
  void exit(const std::string& reason, bool recursive, std::optional<ActorAddress> forwardTo);
  EngineMessage make(MessageType type, Json body) const;
  Json addressbook_json() const;

  std::shared_ptr<const compile::CompiledModel> model_;
  const compile::BehaviorProgram* program_;
  double timeScale_;

  ActorAddress director_;
  std::vector<ActorAddress> ioActors_;
  std::string instanceName_;
  bool initialized_ = false;
  bool started_ = false;
  bool exited_ = false;

  std::string state_;
  std::uint64_t epoch_ = 0;
  bool transitionPending_ = false;
  std::uint64_t timerToken_ = 0;
  bool timerArmed_ = false;
  bool interactionOpen_ = false;

  std::deque<Pooled> pool_;
  Json store_ = Json::object();
  std::map<std::string, ActorAddress> addressbook_;  // from director broadcasts
  std::map<std::string, ActorAddress> learned_;      // senders of received messages
  std::map<std::string, ActorAddress> spawned_;      // actors created here
  std::set<std::string> exitedSubjects_;
  std::vector<ActorAddress> children_;
};

/// Placeholder content for a payload field with no value in the store.
Json placeholder(pass::FieldType type);

}  // namespace passflow::runtime
