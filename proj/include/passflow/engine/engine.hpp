#pragma once

#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "passflow/engine/models.hpp"
#include "passflow/runtime/runtime.hpp"

namespace passflow::engine {

/// One JSON object per line: {ts, instanceId, subject, event, detail}.
class StructuredLog {
 public:
  explicit StructuredLog(std::ostream* out = nullptr) : out_(out) {}
  void set_stream(std::ostream* out) { out_ = out; }
  void write(const std::string& instanceId, const std::string& subject, const std::string& event,
             const nlohmann::ordered_json& detail);

 private:
  std::ostream* out_;
  std::mutex mutex_;
};

struct EngineOptions {
  runtime::RuntimeOptions runtime;
  LoadOptions load;
  std::optional<std::filesystem::path> dataDir;
  /// Run timers against the wall clock on a background thread. Without it
  /// every call settles the actor system before returning and timers only
  /// fire through advance().
  bool realtime = false;
  std::ostream* log = nullptr;
};

/// The runner: stores models, starts and stops instances, brokers tasks.
/// Thread-safe; every call is serialized.
class Engine {
 public:
  explicit Engine(EngineOptions options = {});
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  ModelRecord upload_model(std::string document, SourceKind kind, std::string name = {});
  std::vector<ModelRecord> models() const;
  ModelRecord model(const std::string& modelId) const;

  /// Returns the new instance id.
  std::string start_instance(const std::string& modelId, const std::string& instanceName,
                             std::vector<std::string>* started = nullptr);
  void stop_instance(const std::string& instanceId);
  runtime::InstanceStatus status(const std::string& instanceId) const;
  std::vector<std::string> instances() const;

  std::vector<runtime::InteractionRequest> list_tasks(const std::optional<std::string>& instanceId = {}) const;
  void complete_task(std::uint64_t requestId, const runtime::Json& values, const std::string& choice = {});

  /// Moves the virtual clock forward by `ms` and settles (manual mode).
  void advance(std::int64_t ms);
  StructuredLog& log() { return log_; }

 private:
  void settle();
  void drive();

  EngineOptions options_;
  ModelStore store_;
  runtime::Runtime runtime_;
  StructuredLog log_;
  std::ofstream logFile_;
  mutable std::mutex mutex_;
  std::condition_variable wake_;
  bool stopping_ = false;
  std::thread driver_;
  std::vector<std::string> instances_;
  unsigned nextInstance_ = 1;
};

}  // namespace passflow::engine
