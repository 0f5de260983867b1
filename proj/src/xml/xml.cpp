#include "passflow/xml.hpp"

#include <expat.h>

#include <memory>

#include "passflow/error.hpp"

namespace passflow::xml {

namespace {

constexpr char kSeparator = '\x01';

void split_name(const char* raw, std::string& ns, std::string& local) {
  std::string_view name(raw);
  auto cut = name.find(kSeparator);
  if (cut == std::string_view::npos) {
    ns.clear();
    local.assign(name);
  } else {
    ns.assign(name.substr(0, cut));
    local.assign(name.substr(cut + 1));
  }
}

struct Builder {
  XML_Parser parser = nullptr;
  std::vector<Element> stack;
  std::optional<Element> root;
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char** attrs) {
  auto* b = static_cast<Builder*>(data);
  Element el;
  split_name(name, el.ns, el.local);
  el.line = static_cast<int>(XML_GetCurrentLineNumber(b->parser));
  for (int i = 0; attrs[i] != nullptr; i += 2) {
    Attribute a;
    split_name(attrs[i], a.ns, a.local);
    a.value = attrs[i + 1];
    el.attributes.push_back(std::move(a));
  }
  b->stack.push_back(std::move(el));
}

void XMLCALL on_end(void* data, const XML_Char*) {
  auto* b = static_cast<Builder*>(data);
  Element done = std::move(b->stack.back());
  b->stack.pop_back();
  if (b->stack.empty()) {
    b->root = std::move(done);
  } else {
    b->stack.back().children.push_back(std::move(done));
  }
}

void XMLCALL on_text(void* data, const XML_Char* s, int len) {
  auto* b = static_cast<Builder*>(data);
  if (!b->stack.empty()) b->stack.back().text.append(s, static_cast<std::size_t>(len));
}

}  // namespace

const std::string* Element::attribute(std::string_view nspace, std::string_view name) const {
  for (const auto& a : attributes) {
    if (a.ns == nspace && a.local == name) return &a.value;
  }
  return nullptr;
}

std::string Element::attribute_or(std::string_view name, std::string fallback) const {
  const auto* v = attribute(name);
  return v ? *v : std::move(fallback);
}

const Element* Element::child(std::string_view nspace, std::string_view name) const {
  for (const auto& c : children) {
    if (c.is(nspace, name)) return &c;
  }
  return nullptr;
}

Element parse(std::string_view document) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(
      XML_ParserCreateNS(nullptr, kSeparator), &XML_ParserFree);
  if (!parser) throw Error(Errc::MalformedXml, "cannot allocate XML parser");
  Builder builder;
  builder.parser = parser.get();
  XML_SetUserData(parser.get(), &builder);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (XML_Parse(parser.get(), document.data(), static_cast<int>(document.size()), XML_TRUE) ==
      XML_STATUS_ERROR) {
    throw Error(Errc::MalformedXml,
                std::string(XML_ErrorString(XML_GetErrorCode(parser.get()))) + " at line " +
                    std::to_string(XML_GetCurrentLineNumber(parser.get())));
  }
  if (!builder.root) throw Error(Errc::MalformedXml, "document has no root element");
  return std::move(*builder.root);
}

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      case '\n': out += "&#10;"; break;
      case '\r': out += "&#13;"; break;
      case '\t': out += "&#9;"; break;
      default: out += c;
    }
  }
  return out;
}

Writer::Writer() { out_ = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

void Writer::indent() { out_.append(stack_.size() * 2, ' '); }

void Writer::start_tag(std::string_view qname,
                       const std::vector<std::pair<std::string, std::string>>& attrs) {
  indent();
  out_ += '<';
  out_ += qname;
  for (const auto& [k, v] : attrs) {
    out_ += ' ';
    out_ += k;
    out_ += "=\"";
    out_ += escape(v);
    out_ += '"';
  }
}

void Writer::open(std::string_view qname, const std::vector<std::pair<std::string, std::string>>& attrs) {
  start_tag(qname, attrs);
  out_ += ">\n";
  stack_.emplace_back(qname);
}

void Writer::leaf(std::string_view qname, const std::vector<std::pair<std::string, std::string>>& attrs) {
  start_tag(qname, attrs);
  out_ += "/>\n";
}

void Writer::text_element(std::string_view qname,
                          const std::vector<std::pair<std::string, std::string>>& attrs,
                          std::string_view text) {
  start_tag(qname, attrs);
  out_ += '>';
  out_ += escape(text);
  out_ += "</";
  out_ += qname;
  out_ += ">\n";
}

void Writer::close() {
  std::string name = std::move(stack_.back());
  stack_.pop_back();
  indent();
  out_ += "</" + name + ">\n";
}

std::string Writer::finish() {
  while (!stack_.empty()) close();
  return std::move(out_);
}

}  // namespace passflow::xml
