#include "passflow/owl.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <set>
#include <unordered_map>

#include "passflow/error.hpp"
#include "passflow/xml.hpp"
#include "rdf.hpp"

namespace passflow::owl {

using namespace passflow::pass;

std::string OwlConfig::pass_namespace() const {
  if (!ontologyIri.empty() && (ontologyIri.back() == '#' || ontologyIri.back() == '/')) return ontologyIri;
  return ontologyIri + "#";
}

namespace {

constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";

// Packed field lists use '|' as separator, so it is escaped along with '%'.
std::string pct_encode(std::string_view text, bool iri) {
  std::string out;
  for (unsigned char c : text) {
    bool keep = iri ? (std::isalnum(c) || c == '-' || c == '.' || c == '_' || c == '~')
                    : (c != '%' && c != '|');
    if (keep) {
      out += static_cast<char>(c);
    } else {
      char buf[4];
      std::snprintf(buf, sizeof buf, "%%%02X", c);
      out += buf;
    }
  }
  return out;
}

std::string pct_decode(std::string_view text) {
  std::string out;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '%' && i + 2 < text.size()) {
      out += static_cast<char>(std::stoi(std::string(text.substr(i + 1, 2)), nullptr, 16));
      i += 2;
    } else {
      out += text[i];
    }
  }
  return out;
}

std::vector<std::string> split_bar(std::string_view text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto bar = text.find('|', start);
    parts.push_back(pct_decode(text.substr(start, bar == std::string_view::npos ? bar : bar - start)));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  return parts;
}

std::string pack_field(const BusinessField& f) {
  return pct_encode(f.name, false) + "|" + pct_encode(f.displayName, false) + "|" + std::string(to_string(f.fieldType));
}

std::string_view state_class(StateKind kind) {
  switch (kind) {
    case StateKind::Do: return "DoState";
    case StateKind::Send: return "SendState";
    case StateKind::Receive: return "ReceiveState";
  }
  return "DoState";
}

std::string_view condition_class(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::Do: return "DoTransitionCondition";
    case TransitionKind::Send: return "SendTransitionCondition";
    case TransitionKind::Receive: return "ReceiveTransitionCondition";
    case TransitionKind::DayTimeTimer: return "DayTimeTimerTransitionCondition";
  }
  return "DoTransitionCondition";
}

class OwlWriter {
 public:
  explicit OwlWriter(const OwlConfig& config) : config_(config) {}

  std::string run(const PassModel& m) {
    std::string base = config_.baseIri;
    std::string ontology = base;
    while (!ontology.empty() && (ontology.back() == '#' || ontology.back() == '/')) ontology.pop_back();

    w_.open("rdf:RDF", {{"xmlns:rdf", std::string(rdf::kRdf)},
                        {"xmlns:rdfs", std::string(kRdfs)},
                        {"xmlns:owl", std::string(rdf::kOwl)},
                        {"xmlns:xsd", std::string(rdf::kXsd)},
                        {"xmlns:pass", config_.pass_namespace()},
                        {"xmlns:pf", std::string(kExtensionNamespace)}});
    w_.open("owl:Ontology", {{"rdf:about", ontology}});
    w_.leaf("owl:imports", {{"rdf:resource", config_.ontologyIri}});
    w_.close();

    std::vector<std::string> top;
    for (const auto& s : m.subjects) top.push_back(s.componentId);
    top.push_back(m.messageExchangeListId);
    for (const auto& s : m.messageSpecifications) top.push_back(s.componentId);
    for (const auto& s : m.subjects) {
      if (auto it = m.behaviors.find(s.componentId); it != m.behaviors.end()) top.push_back(it->second.componentId);
    }
    begin(m.componentId, "PASSProcessModel", m.componentLabel);
    for (const auto& id : top) link("pass:contains", id);
    end();

    for (const auto& s : m.subjects) {
      begin(s.componentId, "FullySpecifiedSubject", s.componentLabel);
      if (auto it = m.behaviors.find(s.componentId); it != m.behaviors.end()) {
        link("pass:hasBehavior", it->second.componentId);
      }
      typed("pf:isStartSubject", "boolean", s.isStartSubject ? "true" : "false");
      end();
    }

    begin(m.messageExchangeListId, "MessageExchangeList", {});
    for (const auto& e : m.messageExchangeList) link("pass:contains", e.componentId);
    end();
    for (const auto& e : m.messageExchangeList) {
      begin(e.componentId, "MessageExchange", e.componentLabel);
      link("pass:hasSender", e.sender);
      link("pass:hasReceiver", e.receiver);
      link("pass:hasMessageType", e.messageSpec);
      end();
    }
    for (const auto& spec : m.messageSpecifications) {
      begin(spec.componentId, "MessageSpecification", spec.componentLabel);
      for (const auto& f : spec.payloadFields) typed("pf:hasPayloadField", "string", pack_field(f));
      end();
    }

    for (const auto& s : m.subjects) {
      auto it = m.behaviors.find(s.componentId);
      if (it != m.behaviors.end()) behavior(it->second);
    }
    w_.close();
    return w_.finish();
  }

 private:
  std::string iri(std::string_view id) const { return config_.baseIri + pct_encode(id, true); }

  void begin(const std::string& id, std::string_view cls, const std::string& label) {
    w_.open("owl:NamedIndividual", {{"rdf:about", iri(id)}});
    w_.leaf("rdf:type", {{"rdf:resource", config_.pass_namespace() + std::string(cls)}});
    typed("pass:hasModelComponentID", "string", id);
    if (!label.empty()) typed("pass:hasModelComponentLabel", "string", label);
  }
  void end() { w_.close(); }

  void typed(std::string_view prop, std::string_view type, const std::string& value) {
    w_.text_element(prop, {{"rdf:datatype", std::string(rdf::kXsd) + std::string(type)}}, value);
  }
  void link(std::string_view prop, const std::string& id) { w_.leaf(prop, {{"rdf:resource", iri(id)}}); }

  void behavior(const SubjectBehavior& b) {
    begin(b.componentId, "SubjectBaseBehavior", b.componentLabel);
    for (const auto& s : b.states) link("pass:contains", s.componentId);
    for (const auto& s : b.states) {
      if (!s.actionId.empty()) link("pass:contains", s.actionId);
    }
    for (const auto& t : b.transitions) link("pass:contains", t.componentId);
    if (!b.initialStateId.empty()) link("pass:hasInitialState", b.initialStateId);
    for (const auto& s : b.states) {
      if (s.isEnd) link("pass:hasEndState", s.componentId);
    }
    end();

    for (const auto& s : b.states) {
      begin(s.componentId, state_class(s.kind), s.componentLabel);
      for (const auto& f : s.dataFields) {
        typed("pf:hasDataField", "string", pack_field(f.field) + (f.readOnly ? "|ro" : "|rw"));
      }
      if (!s.originKind.empty()) typed("pf:originKind", "string", s.originKind);
      end();
      if (!s.actionId.empty()) {
        begin(s.actionId, "Action", {});
        link("pass:contains", s.componentId);
        for (const auto* t : b.outgoing(s.componentId)) link("pass:contains", t->componentId);
        end();
      }
    }

    for (const auto& t : b.transitions) {
      begin(t.componentId, to_string(t.kind), t.componentLabel);
      link("pass:hasSourceState", t.sourceState);
      link("pass:hasTargetState", t.targetState);
      std::visit([&](const auto& c) { condition_link(c); }, t.condition);
      if (t.branch) {
        typed("pf:branchEventId", "string", t.branch->eventId);
        if (!t.branch->eventLabel.empty()) typed("pf:branchEventLabel", "string", t.branch->eventLabel);
        typed("pf:branchEntryFlowId", "string", t.branch->entryFlowId);
        if (!t.branch->entryFlowLabel.empty()) typed("pf:branchEntryFlowLabel", "string", t.branch->entryFlowLabel);
      }
      end();
      std::visit([&](const auto& c) { condition(c, t.kind); }, t.condition);
    }
  }

  void condition_link(const std::monostate&) {}
  template <typename C>
  void condition_link(const C& c) {
    link("pass:hasTransitionCondition", c.componentId);
  }

  void condition(const std::monostate&, TransitionKind) {}
  void condition(const DoCondition& c, TransitionKind kind) {
    begin(c.componentId, condition_class(kind), c.label);
    end();
  }
  void condition(const SendCondition& c, TransitionKind kind) {
    begin(c.componentId, condition_class(kind), {});
    link("pass:requiresPerformedMessageExchange", c.messageExchange);
    link("pass:requiresMessageSentTo", c.messageSentTo);
    end();
  }
  void condition(const ReceiveCondition& c, TransitionKind kind) {
    begin(c.componentId, condition_class(kind), {});
    link("pass:requiresPerformedMessageExchange", c.messageExchange);
    link("pass:requiresMessageSentFrom", c.messageSentFrom);
    end();
  }
  void condition(const TimerCondition& c, TransitionKind kind) {
    begin(c.componentId, condition_class(kind), {});
    typed("pass:hasDurationTimeOutTime", "duration", c.duration.to_iso8601());
    end();
  }

  const OwlConfig& config_;
  xml::Writer w_;
};

enum class Cls {
  Model,
  Subject,
  ExchangeList,
  Exchange,
  Spec,
  Behavior,
  DoState,
  SendState,
  ReceiveState,
  Action,
  DoTransition,
  SendTransition,
  ReceiveTransition,
  TimerTransition,
  DoCondition,
  SendCondition,
  ReceiveCondition,
  TimerCondition,
};

const std::map<std::string, Cls, std::less<>>& class_table() {
  static const std::map<std::string, Cls, std::less<>> table{
      {"PASSProcessModel", Cls::Model},
      {"FullySpecifiedSubject", Cls::Subject},
      {"MessageExchangeList", Cls::ExchangeList},
      {"MessageExchange", Cls::Exchange},
      {"StandardMessageExchange", Cls::Exchange},
      {"MessageSpecification", Cls::Spec},
      {"SubjectBaseBehavior", Cls::Behavior},
      {"SubjectBehavior", Cls::Behavior},
      {"DoState", Cls::DoState},
      {"SendState", Cls::SendState},
      {"ReceiveState", Cls::ReceiveState},
      {"Action", Cls::Action},
      {"DoTransition", Cls::DoTransition},
      {"SendTransition", Cls::SendTransition},
      {"ReceiveTransition", Cls::ReceiveTransition},
      {"DayTimeTimerTransition", Cls::TimerTransition},
      {"DoTransitionCondition", Cls::DoCondition},
      {"SendTransitionCondition", Cls::SendCondition},
      {"ReceiveTransitionCondition", Cls::ReceiveCondition},
      {"DayTimeTimerTransitionCondition", Cls::TimerCondition},
  };
  return table;
}

// Marker classes that refine a state class instead of replacing it.
constexpr std::string_view kInitialMarker = "InitialStateOfBehavior";
constexpr std::string_view kEndMarker = "EndState";

struct Individual {
  std::string iri;
  std::size_t order = 0;
  std::optional<Cls> cls;
  bool initialMarker = false;
  bool endMarker = false;
  std::vector<std::pair<std::string, rdf::Term>> props;
  std::string id;
};

class OwlReader {
 public:
  explicit OwlReader(const OwlConfig& config) : ns_(config.pass_namespace()) {}

  PassModel run(std::string_view document) {
    index(rdf::parse_rdf_xml(document));
    classify();

    PassModel m;
    const auto models = of(Cls::Model);
    if (models.size() > 1) throw Error(Errc::StructuralError, "more than one PASSProcessModel individual");
    if (!models.empty()) {
      m.componentId = models[0]->id;
      m.componentLabel = literal(*models[0], pass("hasModelComponentLabel")).value_or("");
    }
    const auto lists = of(Cls::ExchangeList);
    if (lists.size() > 1) throw Error(Errc::StructuralError, "more than one MessageExchangeList individual");
    if (!lists.empty()) m.messageExchangeListId = lists[0]->id;

    for (const auto* spec : of(Cls::Spec)) {
      MessageSpecification s{spec->id, label(*spec), {}};
      for (const auto& packed : literals(*spec, ext("hasPayloadField"))) s.payloadFields.push_back(unpack(packed, spec->id));
      m.messageSpecifications.push_back(std::move(s));
    }
    for (const auto* ex : of(Cls::Exchange)) {
      m.messageExchangeList.push_back({ex->id, label(*ex), ref(*ex, pass("hasSender")),
                                       ref(*ex, pass("hasReceiver")), ref(*ex, pass("hasMessageType"))});
    }
    for (const auto* subj : of(Cls::Subject)) {
      Subject s{subj->id, label(*subj), false};
      auto behaviors = refs(*subj, pass("hasBehavior"));
      if (behaviors.size() > 1) {
        throw Error(Errc::StructuralError, "subject '" + subj->id + "' has more than one behavior", {subj->id});
      }
      if (!behaviors.empty()) {
        SubjectBehavior b = behavior(*behaviors[0], subj->id);
        auto flag = literal(*subj, ext("isStartSubject"));
        const State* init = b.state(b.initialStateId);
        s.isStartSubject = flag ? (*flag == "true" || *flag == "1")
                                : (init != nullptr && init->kind != StateKind::Receive);
        m.behaviors.emplace(subj->id, std::move(b));
      } else if (auto flag = literal(*subj, ext("isStartSubject"))) {
        s.isStartSubject = *flag == "true" || *flag == "1";
      }
      m.subjects.push_back(std::move(s));
    }
    return m;
  }

 private:
  std::string pass(std::string_view local) const { return ns_ + std::string(local); }
  static std::string ext(std::string_view local) { return std::string(kExtensionNamespace) + std::string(local); }

  void index(std::vector<rdf::Triple> triples) {
    const std::string type = std::string(rdf::kRdf) + "type";
    for (auto& t : triples) {
      auto [it, inserted] = by_iri_.try_emplace(t.subject);
      if (inserted) {
        it->second.iri = t.subject;
        it->second.order = by_iri_.size();
      }
      if (t.predicate == type && t.object.is_resource()) {
        types_[t.subject].push_back(t.object.value);
      } else {
        it->second.props.emplace_back(t.predicate, std::move(t.object));
      }
    }
  }

  void classify() {
    for (auto& [iri, ind] : by_iri_) {
      for (const auto& type : types_[iri]) {
        if (type.rfind(ns_, 0) != 0) continue;  // owl:NamedIndividual and foreign vocabularies
        std::string local = type.substr(ns_.size());
        if (local == kInitialMarker) {
          ind.initialMarker = true;
          continue;
        }
        if (local == kEndMarker) {
          ind.endMarker = true;
          continue;
        }
        auto it = class_table().find(local);
        if (it == class_table().end()) {
          throw Error(Errc::UnknownClass, "individual <" + iri + "> has unsupported PASS class '" + local + "'",
                      {local, iri});
        }
        if (ind.cls && *ind.cls != it->second) {
          throw Error(Errc::StructuralError, "individual <" + iri + "> has more than one PASS class", {iri});
        }
        ind.cls = it->second;
      }
      if (!ind.cls) continue;
      auto id = literal(ind, pass("hasModelComponentID"));
      if (!id || id->empty()) {
        throw Error(Errc::StructuralError, "individual <" + iri + "> has no hasModelComponentID", {iri});
      }
      ind.id = *id;
    }
    for (auto& [iri, ind] : by_iri_) {
      if (ind.cls) ordered_.push_back(&ind);
    }
    std::sort(ordered_.begin(), ordered_.end(), [](auto* a, auto* b) { return a->order < b->order; });
  }

  std::vector<const Individual*> of(Cls cls) const {
    std::vector<const Individual*> out;
    for (const auto* ind : ordered_) {
      if (ind->cls == cls) out.push_back(ind);
    }
    return out;
  }

  std::vector<std::string> literals(const Individual& ind, const std::string& prop) const {
    std::vector<std::string> out;
    for (const auto& [p, o] : ind.props) {
      if (p == prop && !o.is_resource()) out.push_back(o.value);
    }
    return out;
  }

  std::optional<std::string> literal(const Individual& ind, const std::string& prop) const {
    for (const auto& [p, o] : ind.props) {
      if (p == prop && !o.is_resource()) return o.value;
    }
    return std::nullopt;
  }

  std::optional<rdf::Term> literal_term(const Individual& ind, const std::string& prop) const {
    for (const auto& [p, o] : ind.props) {
      if (p == prop && !o.is_resource()) return o;
    }
    return std::nullopt;
  }

  std::string label(const Individual& ind) const {
    return literal(ind, pass("hasModelComponentLabel")).value_or("");
  }

  std::vector<const Individual*> refs(const Individual& ind, const std::string& prop) const {
    std::vector<const Individual*> out;
    for (const auto& [p, o] : ind.props) {
      if (p != prop || !o.is_resource()) continue;
      auto it = by_iri_.find(o.value);
      if (it == by_iri_.end() || !it->second.cls) {
        throw Error(Errc::StructuralError,
                    "<" + ind.iri + "> refers to <" + o.value + "> which is not a PASS individual", {ind.id});
      }
      out.push_back(&it->second);
    }
    return out;
  }

  std::string ref(const Individual& ind, const std::string& prop) const {
    auto r = refs(ind, prop);
    if (r.size() > 1) {
      throw Error(Errc::StructuralError, "'" + ind.id + "' has more than one value for " + prop, {ind.id});
    }
    return r.empty() ? std::string() : r[0]->id;
  }

  static BusinessField unpack(const std::string& packed, const std::string& owner) {
    auto parts = split_bar(packed);
    if (parts.size() != 3) throw Error(Errc::StructuralError, "malformed payload field '" + packed + "'", {owner});
    auto type = field_type_from_string(parts[2]);
    if (!type) throw Error(Errc::StructuralError, "unknown field type '" + parts[2] + "'", {owner});
    return {parts[0], parts[1], *type};
  }

  SubjectBehavior behavior(const Individual& b, const std::string& subjectId) const {
    SubjectBehavior out;
    out.componentId = b.id;
    out.componentLabel = label(b);
    out.subjectId = subjectId;

    std::set<const Individual*> members;
    for (const auto* c : refs(b, pass("contains"))) members.insert(c);
    for (const auto* ind : ordered_) {
      for (const auto& [p, o] : ind->props) {
        if (p == pass("belongsTo") && o.is_resource() && o.value == b.iri) members.insert(ind);
      }
    }
    std::vector<const Individual*> sorted(members.begin(), members.end());
    std::sort(sorted.begin(), sorted.end(), [](auto* x, auto* y) { return x->order < y->order; });

    std::set<std::string> initial, ends;
    for (const auto* s : refs(b, pass("hasInitialState"))) initial.insert(s->id);
    for (const auto* s : refs(b, pass("hasEndState"))) ends.insert(s->id);

    std::map<std::string, std::string> action_of;
    for (const auto* a : sorted) {
      if (a->cls != Cls::Action) continue;
      for (const auto* c : refs(*a, pass("contains"))) {
        if (c->cls == Cls::DoState || c->cls == Cls::SendState || c->cls == Cls::ReceiveState) action_of[c->id] = a->id;
      }
    }

    for (const auto* ind : sorted) {
      StateKind kind;
      switch (*ind->cls) {
        case Cls::DoState: kind = StateKind::Do; break;
        case Cls::SendState: kind = StateKind::Send; break;
        case Cls::ReceiveState: kind = StateKind::Receive; break;
        default: continue;
      }
      State s;
      s.componentId = ind->id;
      s.componentLabel = label(*ind);
      s.kind = kind;
      s.isInitial = ind->initialMarker || initial.count(ind->id) > 0;
      s.isEnd = ind->endMarker || ends.count(ind->id) > 0;
      // Models authored without Action individuals get the id a translated
      // model would carry.
      auto action = action_of.find(ind->id);
      s.actionId = action != action_of.end() ? action->second : ind->id + "~action";
      for (const auto& packed : literals(*ind, ext("hasDataField"))) {
        auto cut = packed.rfind('|');
        if (cut == std::string::npos) throw Error(Errc::StructuralError, "malformed data field '" + packed + "'", {ind->id});
        std::string access = packed.substr(cut + 1);
        if (access != "ro" && access != "rw") {
          throw Error(Errc::StructuralError, "malformed data field '" + packed + "'", {ind->id});
        }
        s.dataFields.push_back({unpack(packed.substr(0, cut), ind->id), access == "ro"});
      }
      s.originKind = literal(*ind, ext("originKind")).value_or("");
      if (s.isInitial) {
        if (!out.initialStateId.empty() && out.initialStateId != s.componentId) {
          // Keep both flagged; validation reports the duplicate.
        } else {
          out.initialStateId = s.componentId;
        }
      }
      out.states.push_back(std::move(s));
    }

    for (const auto* ind : sorted) {
      TransitionKind kind;
      switch (*ind->cls) {
        case Cls::DoTransition: kind = TransitionKind::Do; break;
        case Cls::SendTransition: kind = TransitionKind::Send; break;
        case Cls::ReceiveTransition: kind = TransitionKind::Receive; break;
        case Cls::TimerTransition: kind = TransitionKind::DayTimeTimer; break;
        default: continue;
      }
      Transition t;
      t.componentId = ind->id;
      t.componentLabel = label(*ind);
      t.kind = kind;
      t.sourceState = ref(*ind, pass("hasSourceState"));
      t.targetState = ref(*ind, pass("hasTargetState"));
      auto conds = refs(*ind, pass("hasTransitionCondition"));
      if (conds.size() > 1) {
        throw Error(Errc::StructuralError, "transition '" + ind->id + "' has more than one condition", {ind->id});
      }
      if (!conds.empty()) t.condition = condition(*conds[0]);
      if (auto event = literal(*ind, ext("branchEventId"))) {
        t.branch = GatewayBranch{*event, literal(*ind, ext("branchEventLabel")).value_or(""),
                                 literal(*ind, ext("branchEntryFlowId")).value_or(""),
                                 literal(*ind, ext("branchEntryFlowLabel")).value_or("")};
      }
      out.transitions.push_back(std::move(t));
    }
    return out;
  }

  TransitionCondition condition(const Individual& c) const {
    switch (*c.cls) {
      case Cls::DoCondition:
        return DoCondition{c.id, label(c)};
      case Cls::SendCondition:
        return SendCondition{c.id, ref(c, pass("requiresPerformedMessageExchange")),
                             ref(c, pass("requiresMessageSentTo"))};
      case Cls::ReceiveCondition:
        return ReceiveCondition{c.id, ref(c, pass("requiresPerformedMessageExchange")),
                                ref(c, pass("requiresMessageSentFrom"))};
      case Cls::TimerCondition: {
        auto term = literal_term(c, pass("hasDurationTimeOutTime"));
        if (!term) throw Error(Errc::StructuralError, "timer condition '" + c.id + "' has no duration", {c.id});
        auto d = Duration::parse(term->value);
        if (!d) {
          throw Error(Errc::StructuralError, "timer condition '" + c.id + "' has invalid duration '" + term->value + "'",
                      {c.id});
        }
        return TimerCondition{c.id, *d};
      }
      default:
        throw Error(Errc::StructuralError, "'" + c.id + "' is not a transition condition", {c.id});
    }
  }

  std::string ns_;
  std::unordered_map<std::string, Individual> by_iri_;
  std::unordered_map<std::string, std::vector<std::string>> types_;
  std::vector<const Individual*> ordered_;
};

}  // namespace

std::string write(const PassModel& model, const OwlConfig& config) {
  auto report = validate(model);
  if (report.has_errors()) {
    std::vector<std::string> details;
    for (const auto& f : report.findings) {
      if (f.severity == Severity::Error) details.push_back(f.componentId + ": " + f.message);
    }
    throw Error(Errc::InvariantViolation, "model does not validate", std::move(details));
  }
  return OwlWriter(config).run(model);
}

PassModel read(std::string_view document, const OwlConfig& config) { return OwlReader(config).run(document); }

}  // namespace passflow::owl
