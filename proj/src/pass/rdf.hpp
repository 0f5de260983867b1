#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace passflow::rdf {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kOwl = "http://www.w3.org/2002/07/owl#";

struct Term {
  enum class Kind { Iri, Blank, Literal };
  Kind kind = Kind::Iri;
  std::string value;
  std::string datatype;
  std::string lang;

  bool is_resource() const { return kind != Kind::Literal; }
};

struct Triple {
  std::string subject;  // IRI, or "_:" + label for blank nodes
  std::string predicate;
  Term object;
};

/// RDF/XML to triples, in document order. Throws Error{MalformedRdf}.
std::vector<Triple> parse_rdf_xml(std::string_view document);

}  // namespace passflow::rdf
