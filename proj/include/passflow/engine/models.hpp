#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "passflow/compile.hpp"
#include "passflow/owl.hpp"
#include "passflow/pass.hpp"

namespace passflow::engine {

enum class SourceKind { Bpmn, Owl };
std::string_view to_string(SourceKind kind);
/// Throws Error{ValidationError} for anything but "bpmn" or "owl".
SourceKind source_kind_from_string(std::string_view text);
/// Guesses from the file extension (.bpmn/.xml vs .owl/.rdf).
std::optional<SourceKind> source_kind_from_path(const std::filesystem::path& path);

struct LoadOptions {
  owl::OwlConfig owl;
  compile::CompileOptions compile;
};

/// Parses a document and, for BPMN, translates it. Throws the parser's or
/// translator's errors.
pass::PassModel load_pass(std::string_view document, SourceKind kind, const LoadOptions& options = {});

/// Throws Error{ValidationError} with the findings as details when the
/// model has validation errors.
void require_valid(const pass::PassModel& model);

/// Every program followed by the catalog, in canonical text form.
std::string artifacts_text(const compile::CompiledModel& model);

struct ModelRecord {
  std::string modelId;
  std::string name;
  SourceKind kind = SourceKind::Bpmn;
  std::string source;
  std::shared_ptr<const compile::CompiledModel> compiled;
  std::string artifacts;
  std::string uploadedAt;  // ISO-8601 UTC
};

/// Uploaded models with their compiled form. Optionally mirrors each
/// record to `<dataDir>/models/<id>/`.
class ModelStore {
 public:
  explicit ModelStore(LoadOptions options = {}, std::optional<std::filesystem::path> dataDir = std::nullopt);

  /// Parses, translates, validates and compiles. The same document
  /// uploaded twice yields two records.
  const ModelRecord& add(std::string document, SourceKind kind, std::string name = {});
  /// Throws Error{NotFound}.
  const ModelRecord& get(const std::string& modelId) const;
  std::vector<const ModelRecord*> list() const;

 private:
  void persist(const ModelRecord& record) const;

  LoadOptions options_;
  std::optional<std::filesystem::path> dataDir_;
  std::map<std::string, ModelRecord> records_;
  std::vector<std::string> order_;
  unsigned next_ = 1;
};

/// Current UTC time as yyyy-mm-ddThh:mm:ss.mmmZ.
std::string utc_timestamp();

}  // namespace passflow::engine
