#pragma once

#include <string>
#include <string_view>

#include "passflow/pass.hpp"

namespace passflow::owl {

inline constexpr std::string_view kDefaultOntologyIri = "http://www.imi.kit.edu/standard-pass-ont";
inline constexpr std::string_view kDefaultBaseIri = "http://passflow.local/model#";
/// Properties the PASS ontology has no slot for (payload fields, data
/// access mappings, start-subject flag, translation origin).
inline constexpr std::string_view kExtensionNamespace = "http://passflow.local/ns/ext#";

struct OwlConfig {
  std::string ontologyIri{kDefaultOntologyIri};
  std::string baseIri{kDefaultBaseIri};

  /// Namespace of PASS classes and properties (ontology IRI + '#').
  std::string pass_namespace() const;
};

/// Writes the model as RDF/XML. Throws Error{InvariantViolation} when
/// validation reports errors; details carry the findings.
std::string write(const pass::PassModel& model, const OwlConfig& config = {});

/// Reads RDF/XML. Duration literals typed xsd:duration, xsd:string or
/// untyped are all accepted.
pass::PassModel read(std::string_view document, const OwlConfig& config = {});

}  // namespace passflow::owl
