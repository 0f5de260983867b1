#include <algorithm>
#include <map>

#include "passflow/error.hpp"
#include "passflow/translate.hpp"

namespace passflow::translate {

using bpmn::NodeKind;

std::string default_label(std::string_view tag, std::string_view id) {
  return std::string(tag) + "_" + std::string(id);
}

std::string name_from_label(std::string_view label, std::string_view tag, std::string_view id) {
  return label == default_label(tag, id) ? std::string() : std::string(label);
}

std::string action_id(std::string_view stateId) { return std::string(stateId) + "~action"; }
std::string condition_id(std::string_view transitionId) { return std::string(transitionId) + "~cond"; }
std::string specification_id(std::string_view exchangeId) { return std::string(exchangeId) + "~spec"; }

const SimpleNode* SimpleProcess::node(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.node.id == id) return &n;
  }
  return nullptr;
}

const bpmn::MessageFlow* SimpleBpmnModel::message_flow(std::string_view id) const {
  for (const auto& m : messageFlows) {
    if (m.id == id) return &m;
  }
  return nullptr;
}

SimpleBpmnModel to_simple(const bpmn::Definitions& model) {
  SimpleBpmnModel out;
  out.id = model.id;
  out.name = model.name;
  out.collaborationId = model.collaborationId;
  out.messageFlows = model.messageFlows;

  for (const auto& participant : model.participants) {
    auto pit = model.processes.find(participant.id);
    if (pit == model.processes.end()) {
      throw Error(Errc::StructuralError, "participant '" + participant.id + "' has no process", {participant.id});
    }
    const bpmn::Process& process = pit->second;
    SimpleProcess sp;
    sp.participant = participant;
    sp.processId = process.id;
    sp.processName = process.name;
    sp.sequenceFlows = process.sequenceFlows;

    auto kind_of = [&](const std::string& id) {
      const auto* n = process.node(id);
      if (!n) throw Error(Errc::StructuralError, "sequence flow endpoint '" + id + "' is not a flow node", {id});
      return n->kind;
    };

    for (const auto& node : process.flowNodes) {
      SimpleNode sn;
      sn.node = node;
      sn.participantId = participant.id;
      for (const auto& f : process.sequenceFlows) {
        if (f.targetRef == node.id) sn.predecessorKinds.push_back(kind_of(f.sourceRef));
        if (f.sourceRef == node.id) sn.successorKinds.push_back(kind_of(f.targetRef));
      }
      for (const auto& m : model.messageFlows) {
        if (m.sourceRef == node.id) sn.messageFlowsOut.push_back(m.id);
        if (m.targetRef == node.id) sn.messageFlowsIn.push_back(m.id);
      }
      bool catch_event =
          node.kind == NodeKind::IntermediateCatchMessageEvent || node.kind == NodeKind::IntermediateCatchTimeEvent;
      if (catch_event) {
        bool from_gateway = std::count(sn.predecessorKinds.begin(), sn.predecessorKinds.end(),
                                       NodeKind::EventBasedGateway) > 0;
        if (from_gateway && sn.predecessorKinds.size() != 1) {
          throw Error(Errc::StructuralError,
                      "catch event '" + node.id + "' follows an event-based gateway and another element", {node.id});
        }
        sn.afterEventGateway = from_gateway;
      }
      sp.nodes.push_back(std::move(sn));
    }

    for (const auto& sn : sp.nodes) {
      if (sn.node.kind != NodeKind::EventBasedGateway) continue;
      for (const auto& f : process.sequenceFlows) {
        if (f.sourceRef != sn.node.id) continue;
        const auto* target = sp.node(f.targetRef);
        if (!target->afterEventGateway) {
          throw Error(Errc::StructuralError,
                      "event-based gateway '" + sn.node.id + "' must lead directly to catch events", {sn.node.id});
        }
      }
    }
    out.processes.push_back(std::move(sp));
  }
  return out;
}

}  // namespace passflow::translate
