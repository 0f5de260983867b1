#include <algorithm>

#include "passflow/bpmn.hpp"
#include "passflow/error.hpp"

namespace passflow::bpmn {

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::StartEvent: return "StartEvent";
    case NodeKind::MessageStartEvent: return "MessageStartEvent";
    case NodeKind::EndEvent: return "EndEvent";
    case NodeKind::Task: return "Task";
    case NodeKind::ExclusiveGateway: return "ExclusiveGateway";
    case NodeKind::EventBasedGateway: return "EventBasedGateway";
    case NodeKind::IntermediateThrowMessageEvent: return "IntermediateThrowMessageEvent";
    case NodeKind::IntermediateCatchMessageEvent: return "IntermediateCatchMessageEvent";
    case NodeKind::IntermediateCatchTimeEvent: return "IntermediateCatchTimeEvent";
  }
  return "?";
}

std::optional<NodeKind> node_kind_from_string(std::string_view name) {
  for (auto k : {NodeKind::StartEvent, NodeKind::MessageStartEvent, NodeKind::EndEvent, NodeKind::Task,
                 NodeKind::ExclusiveGateway, NodeKind::EventBasedGateway,
                 NodeKind::IntermediateThrowMessageEvent, NodeKind::IntermediateCatchMessageEvent,
                 NodeKind::IntermediateCatchTimeEvent}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view element_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::StartEvent:
    case NodeKind::MessageStartEvent: return "startEvent";
    case NodeKind::EndEvent: return "endEvent";
    case NodeKind::Task: return "task";
    case NodeKind::ExclusiveGateway: return "exclusiveGateway";
    case NodeKind::EventBasedGateway: return "eventBasedGateway";
    case NodeKind::IntermediateThrowMessageEvent: return "intermediateThrowEvent";
    case NodeKind::IntermediateCatchMessageEvent:
    case NodeKind::IntermediateCatchTimeEvent: return "intermediateCatchEvent";
  }
  return "?";
}

const FlowNode* Process::node(std::string_view nodeId) const {
  for (const auto& n : flowNodes) {
    if (n.id == nodeId) return &n;
  }
  return nullptr;
}

const SequenceFlow* Process::flow(std::string_view flowId) const {
  for (const auto& f : sequenceFlows) {
    if (f.id == flowId) return &f;
  }
  return nullptr;
}

const Participant* Definitions::participant(std::string_view participantId) const {
  for (const auto& p : participants) {
    if (p.id == participantId) return &p;
  }
  return nullptr;
}

const Participant* Definitions::owner_of(std::string_view nodeId) const {
  for (const auto& [pid, proc] : processes) {
    if (proc.node(nodeId)) return participant(pid);
  }
  return nullptr;
}

const FlowNode* Definitions::node(std::string_view nodeId) const {
  for (const auto& [pid, proc] : processes) {
    if (const auto* n = proc.node(nodeId)) return n;
  }
  return nullptr;
}

namespace {

struct Violation {
  std::string message;
  std::vector<std::string> ids;
};

bool is_gateway(NodeKind k) {
  return k == NodeKind::ExclusiveGateway || k == NodeKind::EventBasedGateway;
}

std::optional<Violation> find_violation(const Definitions& m) {
  std::set<std::string> ids;
  auto claim = [&](const std::string& id, std::string_view what) -> std::optional<Violation> {
    if (id.empty()) return Violation{std::string(what) + " without id", {}};
    if (!ids.insert(id).second) return Violation{"duplicate id '" + id + "'", {id}};
    return std::nullopt;
  };

  if (m.participants.empty()) return Violation{"collaboration has no participants", {}};
  if (m.processes.size() != m.participants.size()) {
    return Violation{"every participant must reference exactly one process", {}};
  }
  for (const auto& p : m.participants) {
    if (auto v = claim(p.id, "participant")) return v;
    auto it = m.processes.find(p.id);
    if (p.processRef.empty() || it == m.processes.end() || it->second.id != p.processRef) {
      return Violation{"participant '" + p.id + "' does not reference a process", {p.id}};
    }
  }
  for (const auto& [pid, proc] : m.processes) {
    if (auto v = claim(proc.id, "process")) return v;
    int starts = 0;
    int ends = 0;
    for (const auto& n : proc.flowNodes) {
      if (auto v = claim(n.id, "flow node")) return v;
    }
    for (const auto& f : proc.sequenceFlows) {
      if (auto v = claim(f.id, "sequence flow")) return v;
      if (!proc.node(f.sourceRef) || !proc.node(f.targetRef)) {
        return Violation{"sequence flow '" + f.id + "' leaves its process or dangles", {f.id}};
      }
      if (f.sourceRef == f.targetRef) return Violation{"sequence flow '" + f.id + "' is a self loop", {f.id}};
    }
    for (const auto& n : proc.flowNodes) {
      std::vector<std::string> in;
      std::vector<std::string> out;
      for (const auto& f : proc.sequenceFlows) {
        if (f.targetRef == n.id) in.push_back(f.id);
        if (f.sourceRef == n.id) out.push_back(f.id);
      }
      if (in != n.incoming || out != n.outgoing) {
        return Violation{"incoming/outgoing of '" + n.id + "' disagree with the sequence flows", {n.id}};
      }
      const bool is_start = n.kind == NodeKind::StartEvent || n.kind == NodeKind::MessageStartEvent;
      if (is_start) ++starts;
      if (n.kind == NodeKind::EndEvent) ++ends;
      if (is_start && !in.empty()) return Violation{"start event '" + n.id + "' has incoming flows", {n.id}};
      if (n.kind == NodeKind::EndEvent && !out.empty()) {
        return Violation{"end event '" + n.id + "' has outgoing flows", {n.id}};
      }
      if (n.kind != NodeKind::EndEvent && out.empty()) {
        return Violation{"'" + n.id + "' has no outgoing sequence flow", {n.id}};
      }
      if (!is_gateway(n.kind) && out.size() > 1) {
        return Violation{"'" + n.id + "' splits without a gateway (implicit parallel split)", {n.id}};
      }
      if (n.timerDuration.has_value() != (n.kind == NodeKind::IntermediateCatchTimeEvent)) {
        return Violation{"timer duration on '" + n.id + "' does not match its kind", {n.id}};
      }
      if (n.kind == NodeKind::EventBasedGateway) {
        for (const auto& fid : out) {
          const auto* target = proc.node(proc.flow(fid)->targetRef);
          if (target->kind != NodeKind::IntermediateCatchMessageEvent &&
              target->kind != NodeKind::IntermediateCatchTimeEvent) {
            return Violation{"event-based gateway '" + n.id + "' must lead directly to catch events", {n.id}};
          }
          if (target->incoming.size() != 1) {
            return Violation{"catch event '" + target->id + "' after event-based gateway has several incoming flows",
                             {target->id}};
          }
        }
      }
    }
    if (starts != 1) {
      return Violation{"process '" + proc.id + "' needs exactly one start event, found " + std::to_string(starts),
                       {proc.id}};
    }
    if (ends < 1) return Violation{"process '" + proc.id + "' has no end event", {proc.id}};
  }
  for (const auto& mf : m.messageFlows) {
    if (auto v = claim(mf.id, "message flow")) return v;
    if (m.participant(mf.sourceRef) || m.participant(mf.targetRef)) {
      return Violation{"message flow '" + mf.id + "' is attached to a pool; use explicit send/receive events",
                       {mf.id}};
    }
    const auto* src = m.node(mf.sourceRef);
    const auto* dst = m.node(mf.targetRef);
    if (!src || !dst) return Violation{"message flow '" + mf.id + "' references a missing node", {mf.id}};
    if (mf.sourceRef == mf.targetRef || m.owner_of(mf.sourceRef) == m.owner_of(mf.targetRef)) {
      return Violation{"message flow '" + mf.id + "' stays within one participant", {mf.id}};
    }
    if (src->kind != NodeKind::IntermediateThrowMessageEvent) {
      return Violation{"message flow '" + mf.id + "' must start at an intermediate throw message event", {mf.id}};
    }
    if (dst->kind != NodeKind::IntermediateCatchMessageEvent && dst->kind != NodeKind::MessageStartEvent) {
      return Violation{"message flow '" + mf.id + "' must end at a message catch or message start event", {mf.id}};
    }
  }
  return std::nullopt;
}

}  // namespace

void check_invariants(const Definitions& model) {
  if (auto v = find_violation(model)) throw Error(Errc::InvariantViolation, v->message, v->ids);
}

namespace detail {
void check_parsed(const Definitions& model) {
  if (auto v = find_violation(model)) throw Error(Errc::StructuralError, v->message, v->ids);
}
}  // namespace detail

Signature signature(const Definitions& m) {
  Signature s;
  s.elements.emplace(m.id, "definitions", m.name);
  s.elements.emplace(m.collaborationId, "collaboration", "");
  for (const auto& p : m.participants) {
    s.elements.emplace(p.id, "participant", p.name);
    s.edges.emplace("processRef", p.id, p.processRef);
  }
  for (const auto& mf : m.messageFlows) {
    s.elements.emplace(mf.id, "messageFlow", mf.name);
    s.edges.emplace(mf.id, mf.sourceRef, mf.targetRef);
  }
  for (const auto& [pid, proc] : m.processes) {
    s.elements.emplace(proc.id, "process", proc.name);
    for (const auto& n : proc.flowNodes) {
      std::string kind(to_string(n.kind));
      if (n.timerDuration) kind += "[" + n.timerDuration->to_iso8601() + "]";
      s.elements.emplace(n.id, kind, n.name);
    }
    for (const auto& f : proc.sequenceFlows) {
      s.elements.emplace(f.id, f.condition ? "sequenceFlow[" + *f.condition + "]" : "sequenceFlow", f.name);
      s.edges.emplace(f.id, f.sourceRef, f.targetRef);
    }
  }
  return s;
}

std::set<std::string> id_set(const Definitions& m) {
  std::set<std::string> ids;
  for (const auto& e : signature(m).elements) {
    if (!std::get<0>(e).empty()) ids.insert(std::get<0>(e));
  }
  return ids;
}

}  // namespace passflow::bpmn
