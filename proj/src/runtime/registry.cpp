#include "passflow/runtime/registry.hpp"

#include "passflow/error.hpp"

namespace passflow::runtime {

void InstanceRegistry::open(const std::string& instanceId, InstanceInfo info) {
  if (instances_.contains(instanceId)) {
    throw Error(Errc::DuplicateInstance, "instance '" + instanceId + "' already exists", {instanceId});
  }
  instances_[instanceId].info = std::move(info);
}

InstanceRegistry::Instance& InstanceRegistry::get(const std::string& instanceId) {
  auto it = instances_.find(instanceId);
  if (it == instances_.end()) throw Error(Errc::NotFound, "no instance '" + instanceId + "'", {instanceId});
  return it->second;
}

const InstanceRegistry::Instance& InstanceRegistry::get(const std::string& instanceId) const {
  return const_cast<InstanceRegistry*>(this)->get(instanceId);
}

const InstanceInfo& InstanceRegistry::info(const std::string& instanceId) const { return get(instanceId).info; }

std::vector<std::string> InstanceRegistry::instance_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, _] : instances_) out.push_back(id);
  return out;
}

RegisterResult InstanceRegistry::register_actor(const std::string& instanceId, const std::string& subject,
                                                const ActorAddress& address) {
  Instance& inst = get(instanceId);
  if (auto owner = owners_.find(address); owner != owners_.end()) {
    if (owner->second.first != instanceId) {
      throw Error(Errc::CrossInstanceConflict,
                  "actor " + address.to_string() + " already belongs to instance '" + owner->second.first + "'",
                  {address.to_string(), owner->second.first, instanceId});
    }
    if (owner->second.second != subject) {
      throw Error(Errc::CrossInstanceConflict,
                  "actor " + address.to_string() + " is already registered as '" + owner->second.second + "'",
                  {address.to_string(), owner->second.second, subject});
    }
    return {RegisterOutcome::AlreadyRegistered, address};
  }
  if (inst.closed) return {RegisterOutcome::InstanceClosed, {}};
  if (auto it = inst.subjects.find(subject); it != inst.subjects.end()) {
    return {RegisterOutcome::Duplicate, it->second};
  }
  if (inst.exited.contains(subject)) return {RegisterOutcome::SubjectExited, {}};
  inst.subjects[subject] = address;
  owners_[address] = {instanceId, subject};
  return {RegisterOutcome::Added, address};
}

std::optional<std::string> InstanceRegistry::deregister(const ActorAddress& address, const std::string& lastState) {
  auto owner = owners_.find(address);
  if (owner == owners_.end()) return std::nullopt;
  auto [instanceId, subject] = owner->second;
  owners_.erase(owner);
  Instance& inst = get(instanceId);
  inst.subjects.erase(subject);
  inst.exited[subject] = lastState;
  return instanceId;
}

void InstanceRegistry::close(const std::string& instanceId) { get(instanceId).closed = true; }

bool InstanceRegistry::closed(const std::string& instanceId) const { return get(instanceId).closed; }

std::map<std::string, ActorAddress> InstanceRegistry::entries(const std::string& instanceId) const {
  return get(instanceId).subjects;
}

std::map<std::string, std::string> InstanceRegistry::exited(const std::string& instanceId) const {
  return get(instanceId).exited;
}

std::optional<std::string> InstanceRegistry::instance_of(const ActorAddress& address) const {
  auto owner = owners_.find(address);
  if (owner == owners_.end()) return std::nullopt;
  return owner->second.first;
}

}  // namespace passflow::runtime
