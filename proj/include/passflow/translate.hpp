#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "passflow/bpmn.hpp"
#include "passflow/pass.hpp"

namespace passflow::translate {

/// A flow node with the context the element-wise mapping needs.
struct SimpleNode {
  bpmn::FlowNode node;
  std::string participantId;
  std::vector<bpmn::NodeKind> predecessorKinds;
  std::vector<bpmn::NodeKind> successorKinds;
  bool afterEventGateway = false;
  std::vector<std::string> messageFlowsOut;
  std::vector<std::string> messageFlowsIn;
};

struct SimpleProcess {
  bpmn::Participant participant;
  std::string processId;
  std::string processName;
  std::vector<SimpleNode> nodes;
  std::vector<bpmn::SequenceFlow> sequenceFlows;

  const SimpleNode* node(std::string_view id) const;
};

struct SimpleBpmnModel {
  std::string id;
  std::string name;
  std::string collaborationId;
  std::vector<bpmn::MessageFlow> messageFlows;
  std::vector<SimpleProcess> processes;  // participant order

  const bpmn::MessageFlow* message_flow(std::string_view id) const;
};

/// Throws Error{StructuralError} when a catch event is fed both by an
/// event-based gateway and by another path.
SimpleBpmnModel to_simple(const bpmn::Definitions& model);

/// Throws Error{DanglingMessageFlow} for a throw/catch event without a
/// message flow, Error{StructuralError} for one with several.
pass::PassModel translate_to_pass(const SimpleBpmnModel& model);
pass::PassModel translate_to_pass(const bpmn::Definitions& model);

/// Throws Error{Untranslatable} for constructs outside the BPMN subset.
bpmn::Definitions translate_to_bpmn(const pass::PassModel& model);

/// Label given to an unnamed element: its XML tag, '_', its id.
std::string default_label(std::string_view tag, std::string_view id);
/// Inverse of default_label for naming: empty when `label` is the default.
std::string name_from_label(std::string_view label, std::string_view tag, std::string_view id);

/// Derived component ids. '~' cannot occur in a BPMN id, so these never
/// collide with translated ids.
std::string action_id(std::string_view stateId);
std::string condition_id(std::string_view transitionId);
std::string specification_id(std::string_view exchangeId);

}  // namespace passflow::translate
