#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "passflow/runtime/message.hpp"

namespace passflow::runtime {

struct InstanceInfo {
  std::string instanceName;
  std::string modelName;
};

enum class RegisterOutcome {
  Added,              // new entry, broadcast to the instance
  AlreadyRegistered,  // same subject, same address
  Duplicate,          // slot taken by `winner`; the registrant must go
  SubjectExited,      // subject already ran to completion in this instance
  InstanceClosed,     // instance is being stopped
};

struct RegisterResult {
  RegisterOutcome outcome = RegisterOutcome::Added;
  ActorAddress winner;
};

/// The director's bookkeeping: which actor plays which subject in which
/// instance. Pure data, no messaging.
class InstanceRegistry {
 public:
  /// Throws Error{DuplicateInstance}.
  void open(const std::string& instanceId, InstanceInfo info);
  bool contains(const std::string& instanceId) const { return instances_.contains(instanceId); }
  /// Throws Error{NotFound}.
  const InstanceInfo& info(const std::string& instanceId) const;
  std::vector<std::string> instance_ids() const;

  /// Throws Error{NotFound} for an unknown instance and
  /// Error{CrossInstanceConflict} when `address` belongs to another one.
  RegisterResult register_actor(const std::string& instanceId, const std::string& subject,
                                const ActorAddress& address);
  /// Removes the entry held by `address`, remembering the subject as exited.
  /// Returns the instance it belonged to.
  std::optional<std::string> deregister(const ActorAddress& address, const std::string& lastState);
  void close(const std::string& instanceId);
  bool closed(const std::string& instanceId) const;

  std::map<std::string, ActorAddress> entries(const std::string& instanceId) const;
  std::map<std::string, std::string> exited(const std::string& instanceId) const;
  std::optional<std::string> instance_of(const ActorAddress& address) const;

  void add_io_actor(const ActorAddress& address) { ioActors_.push_back(address); }
  const std::vector<ActorAddress>& io_actors() const { return ioActors_; }

 private:
  struct Instance {
    InstanceInfo info;
    std::map<std::string, ActorAddress> subjects;
    std::map<std::string, std::string> exited;  // subject -> last state id
    bool closed = false;
  };
  Instance& get(const std::string& instanceId);
  const Instance& get(const std::string& instanceId) const;

  std::map<std::string, Instance> instances_;
  std::map<ActorAddress, std::pair<std::string, std::string>> owners_;  // address -> (instance, subject)
  std::vector<ActorAddress> ioActors_;
};

}  // namespace passflow::runtime
