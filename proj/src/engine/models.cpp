#include "passflow/engine/models.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

#include "passflow/bpmn.hpp"
#include "passflow/error.hpp"
#include "passflow/translate.hpp"

namespace passflow::engine {

std::string_view to_string(SourceKind kind) { return kind == SourceKind::Bpmn ? "bpmn" : "owl"; }

SourceKind source_kind_from_string(std::string_view text) {
  if (text == "bpmn") return SourceKind::Bpmn;
  if (text == "owl") return SourceKind::Owl;
  throw Error(Errc::ValidationError, "model kind must be 'bpmn' or 'owl', got '" + std::string(text) + "'");
}

std::optional<SourceKind> source_kind_from_path(const std::filesystem::path& path) {
  auto ext = path.extension().string();
  if (ext == ".bpmn" || ext == ".xml") return SourceKind::Bpmn;
  if (ext == ".owl" || ext == ".rdf") return SourceKind::Owl;
  return std::nullopt;
}

pass::PassModel load_pass(std::string_view document, SourceKind kind, const LoadOptions& options) {
  if (kind == SourceKind::Owl) return owl::read(document, options.owl);
  return translate::translate_to_pass(bpmn::parse(document));
}

void require_valid(const pass::PassModel& model) {
  auto report = pass::validate(model);
  if (!report.has_errors()) return;
  std::vector<std::string> details;
  for (const auto& f : report.findings) {
    if (f.severity == pass::Severity::Error) details.push_back(f.componentId + ": " + f.rule + ": " + f.message);
  }
  throw Error(Errc::ValidationError, "model failed validation", std::move(details));
}

std::string artifacts_text(const compile::CompiledModel& model) {
  std::string out;
  for (const auto& [id, program] : model.programs) out += compile::serialize(program);
  out += compile::serialize(model.catalog);
  return out;
}

std::string utc_timestamp() {
  using namespace std::chrono;
  auto now = system_clock::now();
  auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::time_t secs = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char frac[8];
  std::snprintf(frac, sizeof frac, ".%03dZ", static_cast<int>(ms));
  return std::string(buf) + frac;
}

ModelStore::ModelStore(LoadOptions options, std::optional<std::filesystem::path> dataDir)
    : options_(std::move(options)), dataDir_(std::move(dataDir)) {}

const ModelRecord& ModelStore::add(std::string document, SourceKind kind, std::string name) {
  auto model = load_pass(document, kind, options_);
  require_valid(model);
  auto compiled = std::make_shared<const compile::CompiledModel>(compile::compile(model, options_.compile));

  ModelRecord r;
  r.modelId = "model-" + std::to_string(next_++);
  r.name = name.empty() ? model.componentLabel : std::move(name);
  r.kind = kind;
  r.source = std::move(document);
  r.artifacts = artifacts_text(*compiled);
  r.compiled = std::move(compiled);
  r.uploadedAt = utc_timestamp();
  if (dataDir_) persist(r);
  order_.push_back(r.modelId);
  return records_.emplace(r.modelId, std::move(r)).first->second;
}

const ModelRecord& ModelStore::get(const std::string& modelId) const {
  auto it = records_.find(modelId);
  if (it == records_.end()) throw Error(Errc::NotFound, "no model '" + modelId + "'", {modelId});
  return it->second;
}

std::vector<const ModelRecord*> ModelStore::list() const {
  std::vector<const ModelRecord*> out;
  for (const auto& id : order_) out.push_back(&records_.at(id));
  return out;
}

void ModelStore::persist(const ModelRecord& record) const {
  auto dir = *dataDir_ / "models" / record.modelId;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  auto write = [&](const std::string& file, const std::string& text) {
    std::ofstream out(dir / file, std::ios::binary);
    out << text;
    if (!out) throw Error(Errc::IoError, "cannot write " + (dir / file).string());
  };
  write(std::string("source.") + std::string(to_string(record.kind)), record.source);
  write("compiled.txt", record.artifacts);
}

}  // namespace passflow::engine
