#include <algorithm>
#include <array>

#include "passflow/bpmn.hpp"
#include "passflow/error.hpp"
#include "passflow/xml.hpp"

namespace passflow::bpmn {

namespace detail {
void check_parsed(const Definitions& model);
}

namespace {

constexpr std::array kUnsupportedFlowNodes = {
    "userTask",        "serviceTask",       "sendTask",        "receiveTask",     "manualTask",
    "scriptTask",      "businessRuleTask",  "callActivity",    "subProcess",      "transaction",
    "adHocSubProcess", "parallelGateway",   "inclusiveGateway", "complexGateway", "boundaryEvent",
    "implicitThrowEvent", "callChoreography", "choreographyTask", "subChoreography",
};

// Silently ignored: these carry layout or tool bookkeeping, never semantics.
constexpr std::array kSilent = {"incoming", "outgoing", "extensionElements", "documentation"};

bool in(const auto& list, std::string_view name) {
  return std::find(list.begin(), list.end(), name) != list.end();
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

class Parser {
 public:
  explicit Parser(Diagnostics* diag) : diag_(diag) {}

  Definitions run(const xml::Element& root) {
    if (!root.is(kModelNamespace, "definitions")) {
      throw Error(Errc::MalformedXml, "root element is not a BPMN 2.0 definitions element (namespace " +
                                          std::string(kModelNamespace) + ")");
    }
    Definitions defs;
    defs.id = root.attribute_or("id");
    defs.name = root.attribute_or("name");

    std::map<std::string, Process> by_process_id;
    const xml::Element* collaboration = nullptr;
    for (const auto& child : root.children) {
      if (child.ns != kModelNamespace) continue;  // BPMNDI and vendor extensions
      if (child.local == "process") {
        Process p = parse_process(child);
        std::string pid = p.id;
        if (!by_process_id.emplace(pid, std::move(p)).second) {
          throw Error(Errc::StructuralError, "duplicate process id '" + pid + "'", {pid});
        }
      } else if (child.local == "collaboration") {
        if (collaboration) throw Error(Errc::StructuralError, "more than one collaboration element");
        collaboration = &child;
      } else if (child.local == "message" || child.local == "itemDefinition") {
        // Message and item definitions only restate what the message flows carry.
      } else if (!in(kSilent, child.local)) {
        warn("dropped <" + child.local + "> '" + child.attribute_or("id") + "'");
      }
    }
    if (!collaboration) {
      throw Error(Errc::StructuralError, "document has no collaboration; every process needs a participant");
    }
    defs.collaborationId = collaboration->attribute_or("id");
    for (const auto& c : collaboration->children) {
      if (c.ns != kModelNamespace) continue;
      if (c.local == "participant") {
        Participant p{c.attribute_or("id"), c.attribute_or("name"), c.attribute_or("processRef")};
        if (p.processRef.empty()) {
          throw Error(Errc::StructuralError, "participant '" + p.id + "' has no process", {p.id});
        }
        auto it = by_process_id.find(p.processRef);
        if (it == by_process_id.end()) {
          throw Error(Errc::StructuralError,
                      "participant '" + p.id + "' references unknown process '" + p.processRef + "'", {p.id});
        }
        if (defs.processes.count(p.id)) throw Error(Errc::StructuralError, "duplicate participant '" + p.id + "'");
        defs.processes.emplace(p.id, it->second);
        defs.participants.push_back(std::move(p));
      } else if (c.local == "messageFlow") {
        defs.messageFlows.push_back(
            {c.attribute_or("id"), c.attribute_or("name"), c.attribute_or("sourceRef"), c.attribute_or("targetRef")});
      } else if (!in(kSilent, c.local)) {
        warn("dropped <" + c.local + "> '" + c.attribute_or("id") + "' from collaboration");
      }
    }
    for (const auto& [pid, proc] : by_process_id) {
      bool referenced = std::any_of(defs.participants.begin(), defs.participants.end(),
                                    [&](const Participant& p) { return p.processRef == pid; });
      if (!referenced) throw Error(Errc::StructuralError, "process '" + pid + "' has no participant", {pid});
    }
    std::set<std::string> seen_refs;
    for (const auto& p : defs.participants) {
      if (!seen_refs.insert(p.processRef).second) {
        throw Error(Errc::StructuralError, "process '" + p.processRef + "' is shared by several participants",
                    {p.processRef});
      }
    }
    detail::check_parsed(defs);
    return defs;
  }

 private:
  void warn(std::string message) {
    if (diag_) diag_->warnings.push_back(std::move(message));
  }

  [[noreturn]] static void unsupported(const xml::Element& el, const std::string& kind) {
    std::string id = el.attribute_or("id");
    throw Error(Errc::UnsupportedElement, "unsupported element '" + id + "' of kind " + kind, {id, kind});
  }

  // Returns the local names of the event definitions carried by an event.
  static std::vector<const xml::Element*> event_definitions(const xml::Element& el) {
    std::vector<const xml::Element*> defs;
    for (const auto& c : el.children) {
      if (c.ns == kModelNamespace && c.local.size() > 15 &&
          c.local.compare(c.local.size() - 15, 15, "EventDefinition") == 0) {
        defs.push_back(&c);
      }
    }
    return defs;
  }

  std::optional<FlowNode> parse_node(const xml::Element& el) {
    FlowNode n;
    n.id = el.attribute_or("id");
    n.name = el.attribute_or("name");
    if (n.id.empty()) throw Error(Errc::StructuralError, "<" + el.local + "> without id at line " + std::to_string(el.line));
    const auto defs = event_definitions(el);
    auto only = [&](std::string_view def) { return defs.size() == 1 && defs.front()->local == def; };
    const std::string& tag = el.local;
    if (tag == "startEvent") {
      if (defs.empty()) {
        n.kind = NodeKind::StartEvent;
      } else if (only("messageEventDefinition")) {
        n.kind = NodeKind::MessageStartEvent;
      } else {
        unsupported(el, "startEvent/" + defs.front()->local);
      }
    } else if (tag == "endEvent") {
      if (!defs.empty()) unsupported(el, "endEvent/" + defs.front()->local);
      n.kind = NodeKind::EndEvent;
    } else if (tag == "task") {
      n.kind = NodeKind::Task;
    } else if (tag == "exclusiveGateway") {
      n.kind = NodeKind::ExclusiveGateway;
    } else if (tag == "eventBasedGateway") {
      n.kind = NodeKind::EventBasedGateway;
    } else if (tag == "intermediateThrowEvent") {
      if (!only("messageEventDefinition")) {
        unsupported(el, defs.empty() ? "intermediateThrowEvent" : "intermediateThrowEvent/" + defs.front()->local);
      }
      n.kind = NodeKind::IntermediateThrowMessageEvent;
    } else if (tag == "intermediateCatchEvent") {
      if (only("messageEventDefinition")) {
        n.kind = NodeKind::IntermediateCatchMessageEvent;
      } else if (only("timerEventDefinition")) {
        const auto* def = defs.front();
        if (def->child(kModelNamespace, "timeDate")) unsupported(el, "timer/timeDate");
        if (def->child(kModelNamespace, "timeCycle")) unsupported(el, "timer/timeCycle");
        const auto* dur = def->child(kModelNamespace, "timeDuration");
        if (!dur) throw Error(Errc::StructuralError, "timer event '" + n.id + "' has no duration", {n.id});
        auto parsed = Duration::parse(trim(dur->text));
        if (!parsed) {
          throw Error(Errc::UnsupportedElement,
                      "timer event '" + n.id + "' has a non day-time duration '" + trim(dur->text) + "'",
                      {n.id, "timer/" + trim(dur->text)});
        }
        n.kind = NodeKind::IntermediateCatchTimeEvent;
        n.timerDuration = *parsed;
      } else {
        unsupported(el, defs.empty() ? "intermediateCatchEvent" : "intermediateCatchEvent/" + defs.front()->local);
      }
    } else if (in(kUnsupportedFlowNodes, tag)) {
      unsupported(el, tag);
    } else {
      return std::nullopt;
    }
    return n;
  }

  Process parse_process(const xml::Element& el) {
    Process p;
    p.id = el.attribute_or("id");
    p.name = el.attribute_or("name");
    if (p.id.empty()) throw Error(Errc::StructuralError, "process without id");
    for (const auto& c : el.children) {
      if (c.ns != kModelNamespace) continue;
      if (c.local == "sequenceFlow") {
        SequenceFlow f{c.attribute_or("id"), c.attribute_or("name"), c.attribute_or("sourceRef"),
                       c.attribute_or("targetRef"), std::nullopt};
        if (const auto* cond = c.child(kModelNamespace, "conditionExpression")) f.condition = trim(cond->text);
        p.sequenceFlows.push_back(std::move(f));
      } else if (auto node = parse_node(c)) {
        p.flowNodes.push_back(std::move(*node));
      } else if (!in(kSilent, c.local)) {
        warn("dropped <" + c.local + "> '" + c.attribute_or("id") + "' in process '" + p.id + "'");
      }
    }
    for (auto& n : p.flowNodes) {
      for (const auto& f : p.sequenceFlows) {
        if (f.targetRef == n.id) n.incoming.push_back(f.id);
        if (f.sourceRef == n.id) n.outgoing.push_back(f.id);
      }
    }
    return p;
  }

  Diagnostics* diag_;
};

}  // namespace

Definitions parse(std::string_view document, Diagnostics* diagnostics) {
  const xml::Element root = xml::parse(document);
  return Parser(diagnostics).run(root);
}

}  // namespace passflow::bpmn
