#include "passflow/engine/engine.hpp"

#include <chrono>

#include "passflow/error.hpp"

namespace passflow::engine {

void StructuredLog::write(const std::string& instanceId, const std::string& subject, const std::string& event,
                          const nlohmann::ordered_json& detail) {
  if (!out_) return;
  nlohmann::ordered_json line;
  line["ts"] = utc_timestamp();
  line["instanceId"] = instanceId;
  line["subject"] = subject;
  line["event"] = event;
  line["detail"] = detail;
  std::lock_guard lock(mutex_);
  *out_ << line.dump() << '\n';
  out_->flush();
}

Engine::Engine(EngineOptions options)
    : options_(std::move(options)), store_(options_.load, options_.dataDir), runtime_(options_.runtime) {
  if (options_.log) {
    log_.set_stream(options_.log);
  } else if (options_.dataDir) {
    std::filesystem::create_directories(*options_.dataDir);
    logFile_.open(*options_.dataDir / "engine.log", std::ios::app);
    if (!logFile_) throw Error(Errc::IoError, "cannot open log in " + options_.dataDir->string());
    log_.set_stream(&logFile_);
  }
  auto& trace = runtime_.trace();
  trace.set_retain(false);
  trace.set_sink([this](const runtime::TraceEvent& e) {
    nlohmann::ordered_json detail = e.detail;
    if (!e.actor.empty()) detail["actor"] = e.actor;
    log_.write(e.instance, e.subject, e.event, detail);
  });
  if (options_.realtime) driver_ = std::thread([this] { drive(); });
}

Engine::~Engine() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  if (driver_.joinable()) driver_.join();
}

void Engine::settle() {
  if (options_.realtime) {
    wake_.notify_all();
  } else {
    runtime_.system().run_until_idle();
  }
}

void Engine::drive() {
  using clock = std::chrono::steady_clock;
  const auto origin = clock::now();
  auto elapsed = [&] { return std::chrono::duration_cast<std::chrono::milliseconds>(clock::now() - origin).count(); };
  std::unique_lock lock(mutex_);
  while (!stopping_) {
    auto& sys = runtime_.system();
    sys.advance_to(elapsed());
    sys.run_until_idle();
    if (auto due = sys.next_timer_due()) {
      wake_.wait_until(lock, origin + std::chrono::milliseconds(*due));
    } else {
      wake_.wait(lock);
    }
  }
}

ModelRecord Engine::upload_model(std::string document, SourceKind kind, std::string name) {
  std::lock_guard lock(mutex_);
  const auto& r = store_.add(std::move(document), kind, std::move(name));
  log_.write("", "", "modelUploaded", {{"modelId", r.modelId}, {"name", r.name}, {"kind", to_string(r.kind)}});
  return r;
}

std::vector<ModelRecord> Engine::models() const {
  std::lock_guard lock(mutex_);
  std::vector<ModelRecord> out;
  for (const auto* r : store_.list()) out.push_back(*r);
  return out;
}

ModelRecord Engine::model(const std::string& modelId) const {
  std::lock_guard lock(mutex_);
  return store_.get(modelId);
}

std::string Engine::start_instance(const std::string& modelId, const std::string& instanceName,
                                   std::vector<std::string>* started) {
  std::lock_guard lock(mutex_);
  const auto& record = store_.get(modelId);
  std::string id = "inst-" + std::to_string(nextInstance_++);
  auto subjects = runtime_.start_instance(record.compiled, id, instanceName.empty() ? id : instanceName);
  instances_.push_back(id);
  log_.write(id, "", "instanceStarted", {{"modelId", modelId}, {"instanceName", instanceName}, {"subjects", subjects}});
  if (started) *started = std::move(subjects);
  settle();
  return id;
}

void Engine::stop_instance(const std::string& instanceId) {
  std::lock_guard lock(mutex_);
  runtime_.stop_instance(instanceId);
  log_.write(instanceId, "", "instanceStopRequested", nlohmann::ordered_json::object());
  settle();
}

runtime::InstanceStatus Engine::status(const std::string& instanceId) const {
  std::lock_guard lock(mutex_);
  return runtime_.status(instanceId);
}

std::vector<std::string> Engine::instances() const {
  std::lock_guard lock(mutex_);
  return instances_;
}

std::vector<runtime::InteractionRequest> Engine::list_tasks(const std::optional<std::string>& instanceId) const {
  std::lock_guard lock(mutex_);
  return runtime_.pending(instanceId);
}

void Engine::complete_task(std::uint64_t requestId, const runtime::Json& values, const std::string& choice) {
  std::lock_guard lock(mutex_);
  runtime_.complete(requestId, values, choice);
  settle();
}

void Engine::advance(std::int64_t ms) {
  std::lock_guard lock(mutex_);
  auto& sys = runtime_.system();
  auto target = sys.now() + ms;
  while (auto due = sys.next_timer_due()) {
    if (*due > target) break;
    sys.advance_to(*due);
    sys.run_until_idle();
  }
  sys.advance_to(target);
  sys.run_until_idle();
}

}  // namespace passflow::engine
