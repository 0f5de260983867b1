#pragma once

#include <map>
#include <memory>
#include <string>

#include "passflow/compile.hpp"
#include "passflow/runtime/actor_system.hpp"
#include "passflow/runtime/registry.hpp"

namespace passflow::runtime {

/// Singleton authority for discovery and instance lifecycle. Handles one
/// message at a time, which is what settles creation races.
class Director : public Actor {
 public:
  explicit Director(double timeScale) : timeScale_(timeScale) {}

  void receive(const EngineMessage& message) override;

  /// Opens the instance in the registry and remembers its programs; a
  /// following start message spawns the start subjects.
  void prepare(const std::string& instanceId, std::shared_ptr<const compile::CompiledModel> model, InstanceInfo info);
  std::shared_ptr<const compile::CompiledModel> model(const std::string& instanceId) const;

  InstanceRegistry& registry() { return registry_; }
  const InstanceRegistry& registry() const { return registry_; }

 private:
  void on_start(const EngineMessage& m);
  void on_register(const EngineMessage& m);
  void on_deregister(const EngineMessage& m);
  void on_stop(const EngineMessage& m);
  Json addressbook(const std::string& instanceId) const;
  void broadcast(const std::string& instanceId);

  double timeScale_;
  InstanceRegistry registry_;
  std::map<std::string, std::shared_ptr<const compile::CompiledModel>> models_;
};

}  // namespace passflow::runtime
