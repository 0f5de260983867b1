#include "rdf.hpp"

#include <cctype>

#include "passflow/error.hpp"
#include "passflow/xml.hpp"

namespace passflow::rdf {

namespace {

bool has_scheme(std::string_view ref) {
  auto colon = ref.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  for (std::size_t i = 0; i < colon; ++i) {
    char c = ref[i];
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.')) return false;
  }
  return true;
}

std::string resolve(std::string_view base, std::string_view ref) {
  if (has_scheme(ref)) return std::string(ref);
  std::string_view doc = base.substr(0, base.find('#'));
  if (ref.empty()) return std::string(doc);
  if (ref.front() == '#') return std::string(doc) + std::string(ref);
  auto slash = doc.rfind('/');
  std::string dir = slash == std::string_view::npos ? std::string() : std::string(doc.substr(0, slash + 1));
  return dir + std::string(ref);
}

class Reader {
 public:
  std::vector<Triple> run(const xml::Element& root) {
    std::string base = attr_base(root, "");
    if (root.is(kRdf, "RDF")) {
      for (const auto& child : root.children) node(child, base);
    } else {
      node(root, base);
    }
    return std::move(triples_);
  }

 private:
  static std::string attr_base(const xml::Element& el, const std::string& inherited) {
    if (const auto* b = el.attribute(xml::kXmlNamespace, "base")) return resolve(inherited, *b);
    return inherited;
  }

  static bool is_syntax_attr(const xml::Attribute& a) {
    if (a.ns == xml::kXmlNamespace) return true;
    if (a.ns.empty()) return true;  // unqualified attributes are not RDF properties
    if (a.ns == kRdf) {
      return a.local == "about" || a.local == "ID" || a.local == "nodeID" || a.local == "resource" ||
             a.local == "datatype" || a.local == "parseType" || a.local == "type";
    }
    return false;
  }

  std::string fresh_blank() { return "_:b" + std::to_string(++blank_counter_); }

  std::string node(const xml::Element& el, const std::string& inherited_base) {
    const std::string base = attr_base(el, inherited_base);
    std::string subject;
    if (const auto* about = el.attribute(kRdf, "about")) {
      subject = resolve(base, *about);
    } else if (const auto* id = el.attribute(kRdf, "ID")) {
      subject = resolve(base, "#" + *id);
    } else if (const auto* nid = el.attribute(kRdf, "nodeID")) {
      subject = "_:" + *nid;
    } else {
      subject = fresh_blank();
    }
    if (!el.is(kRdf, "Description")) {
      if (el.ns.empty()) throw Error(Errc::MalformedRdf, "node element <" + el.local + "> has no namespace");
      triples_.push_back({subject, std::string(kRdf) + "type", {Term::Kind::Iri, el.ns + el.local, {}, {}}});
    }
    if (const auto* type = el.attribute(kRdf, "type")) {
      triples_.push_back({subject, std::string(kRdf) + "type", {Term::Kind::Iri, resolve(base, *type), {}, {}}});
    }
    for (const auto& a : el.attributes) {
      if (is_syntax_attr(a)) continue;
      triples_.push_back({subject, a.ns + a.local, {Term::Kind::Literal, a.value, {}, {}}});
    }
    for (const auto& child : el.children) property(child, subject, base);
    return subject;
  }

  void property(const xml::Element& el, const std::string& subject, const std::string& inherited_base) {
    const std::string base = attr_base(el, inherited_base);
    if (el.ns.empty()) throw Error(Errc::MalformedRdf, "property element <" + el.local + "> has no namespace");
    const std::string predicate = el.ns + el.local;
    auto add = [&](Term object) { triples_.push_back({subject, predicate, std::move(object)}); };

    if (const auto* res = el.attribute(kRdf, "resource")) {
      add({Term::Kind::Iri, resolve(base, *res), {}, {}});
      return;
    }
    if (const auto* nid = el.attribute(kRdf, "nodeID")) {
      add({Term::Kind::Blank, "_:" + *nid, {}, {}});
      return;
    }
    if (const auto* pt = el.attribute(kRdf, "parseType")) {
      if (*pt == "Resource") {
        std::string blank = fresh_blank();
        add({Term::Kind::Blank, blank, {}, {}});
        for (const auto& child : el.children) property(child, blank, base);
        return;
      }
      if (*pt == "Literal") {
        add({Term::Kind::Literal, el.text, std::string(kRdf) + "XMLLiteral", {}});
        return;
      }
      if (*pt == "Collection") {
        std::string head = std::string(kRdf) + "nil";
        std::vector<std::string> items;
        for (const auto& child : el.children) items.push_back(node(child, base));
        for (auto it = items.rbegin(); it != items.rend(); ++it) {
          std::string cell = fresh_blank();
          triples_.push_back({cell, std::string(kRdf) + "first", {Term::Kind::Blank, *it, {}, {}}});
          triples_.push_back({cell, std::string(kRdf) + "rest",
                              {head.rfind("_:", 0) == 0 ? Term::Kind::Blank : Term::Kind::Iri, head, {}, {}}});
          head = cell;
        }
        add({head.rfind("_:", 0) == 0 ? Term::Kind::Blank : Term::Kind::Iri, head, {}, {}});
        return;
      }
      throw Error(Errc::MalformedRdf, "unsupported rdf:parseType '" + *pt + "'");
    }
    if (!el.children.empty()) {
      if (el.children.size() != 1) {
        throw Error(Errc::MalformedRdf, "property <" + el.local + "> holds more than one node element");
      }
      std::string object = node(el.children.front(), base);
      add({object.rfind("_:", 0) == 0 ? Term::Kind::Blank : Term::Kind::Iri, object, {}, {}});
      return;
    }
    bool property_attrs = false;
    for (const auto& a : el.attributes) property_attrs |= !is_syntax_attr(a);
    if (property_attrs) {
      std::string blank = fresh_blank();
      add({Term::Kind::Blank, blank, {}, {}});
      for (const auto& a : el.attributes) {
        if (!is_syntax_attr(a)) triples_.push_back({blank, a.ns + a.local, {Term::Kind::Literal, a.value, {}, {}}});
      }
      return;
    }
    Term literal{Term::Kind::Literal, el.text, {}, {}};
    if (const auto* dt = el.attribute(kRdf, "datatype")) literal.datatype = resolve(base, *dt);
    if (const auto* lang = el.attribute(xml::kXmlNamespace, "lang")) literal.lang = *lang;
    add(std::move(literal));
  }

  std::vector<Triple> triples_;
  int blank_counter_ = 0;
};

}  // namespace

std::vector<Triple> parse_rdf_xml(std::string_view document) {
  xml::Element root;
  try {
    root = xml::parse(document);
  } catch (const Error& e) {
    throw Error(Errc::MalformedRdf, e.what());
  }
  return Reader().run(root);
}

}  // namespace passflow::rdf
