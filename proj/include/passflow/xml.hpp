#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace passflow::xml {

inline constexpr std::string_view kXmlNamespace = "http://www.w3.org/XML/1998/namespace";

struct Attribute {
  std::string ns;  // empty for unqualified attributes
  std::string local;
  std::string value;
};

/// Namespace-resolved element tree. Text holds the concatenated character
/// data that appears directly inside the element.
struct Element {
  std::string ns;
  std::string local;
  std::vector<Attribute> attributes;
  std::vector<Element> children;
  std::string text;
  int line = 0;

  bool is(std::string_view nspace, std::string_view name) const {
    return ns == nspace && local == name;
  }
  const std::string* attribute(std::string_view nspace, std::string_view name) const;
  /// Unqualified attribute lookup.
  const std::string* attribute(std::string_view name) const { return attribute({}, name); }
  std::string attribute_or(std::string_view name, std::string fallback = {}) const;
  const Element* child(std::string_view nspace, std::string_view name) const;
};

/// Parses a document; throws Error{MalformedXml} with the expat message and
/// line number on failure.
Element parse(std::string_view document);

std::string escape(std::string_view text);

/// Streaming writer producing indented XML with a fixed prefix per namespace.
class Writer {
 public:
  Writer();

  void open(std::string_view qname, const std::vector<std::pair<std::string, std::string>>& attrs = {});
  void leaf(std::string_view qname, const std::vector<std::pair<std::string, std::string>>& attrs = {});
  void text_element(std::string_view qname,
                    const std::vector<std::pair<std::string, std::string>>& attrs,
                    std::string_view text);
  void close();

  std::string finish();

 private:
  void start_tag(std::string_view qname, const std::vector<std::pair<std::string, std::string>>& attrs);
  void indent();

  std::string out_;
  std::vector<std::string> stack_;
};

}  // namespace passflow::xml
