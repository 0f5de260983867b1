#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "passflow/duration.hpp"

namespace passflow::bpmn {

inline constexpr std::string_view kModelNamespace = "http://www.omg.org/spec/BPMN/20100524/MODEL";

enum class NodeKind {
  StartEvent,
  MessageStartEvent,
  EndEvent,
  Task,
  ExclusiveGateway,
  EventBasedGateway,
  IntermediateThrowMessageEvent,
  IntermediateCatchMessageEvent,
  IntermediateCatchTimeEvent,
};

std::string_view to_string(NodeKind kind);
std::optional<NodeKind> node_kind_from_string(std::string_view name);
/// BPMN XML element name used for this kind ("startEvent", "intermediateCatchEvent", ...).
std::string_view element_name(NodeKind kind);

struct Participant {
  std::string id;
  std::string name;
  std::string processRef;
  friend bool operator==(const Participant&, const Participant&) = default;
};

struct MessageFlow {
  std::string id;
  std::string name;
  std::string sourceRef;
  std::string targetRef;
  friend bool operator==(const MessageFlow&, const MessageFlow&) = default;
};

struct SequenceFlow {
  std::string id;
  std::string name;
  std::string sourceRef;
  std::string targetRef;
  std::optional<std::string> condition;
  friend bool operator==(const SequenceFlow&, const SequenceFlow&) = default;
};

struct FlowNode {
  std::string id;
  std::string name;
  NodeKind kind = NodeKind::Task;
  std::optional<Duration> timerDuration;  // IntermediateCatchTimeEvent only
  std::vector<std::string> incoming;
  std::vector<std::string> outgoing;
  friend bool operator==(const FlowNode&, const FlowNode&) = default;
};

struct Process {
  std::string id;
  std::string name;
  std::vector<FlowNode> flowNodes;
  std::vector<SequenceFlow> sequenceFlows;

  const FlowNode* node(std::string_view nodeId) const;
  const SequenceFlow* flow(std::string_view flowId) const;
  friend bool operator==(const Process&, const Process&) = default;
};

struct Definitions {
  std::string id;
  std::string name;
  std::string collaborationId;
  std::vector<Participant> participants;
  std::vector<MessageFlow> messageFlows;
  std::map<std::string, Process> processes;  // keyed by participant id

  const Participant* participant(std::string_view participantId) const;
  /// Participant owning the flow node, or nullptr.
  const Participant* owner_of(std::string_view nodeId) const;
  const FlowNode* node(std::string_view nodeId) const;
  friend bool operator==(const Definitions&, const Definitions&) = default;
};

struct Diagnostics {
  std::vector<std::string> warnings;
};

/// Parses the supported BPMN 2.0 subset. Lanes, layout, documentation,
/// annotations and data objects are dropped (a warning is recorded in
/// `diagnostics` when given); unsupported flow node kinds are errors.
Definitions parse(std::string_view document, Diagnostics* diagnostics = nullptr);

/// Checks every type invariant; throws Error{InvariantViolation} (or the
/// given code) naming the first violation.
void check_invariants(const Definitions& model);

/// Emits BPMN 2.0 XML without a diagram-interchange section.
std::string serialize(const Definitions& model);

/// Order-independent structural summary: (id, kind, name) of every element
/// and the endpoints of every flow. Two models with equal signatures have the
/// same id set and topology.
struct Signature {
  std::set<std::tuple<std::string, std::string, std::string>> elements;
  std::set<std::tuple<std::string, std::string, std::string>> edges;  // (id, source, target)
  friend bool operator==(const Signature&, const Signature&) = default;
};
Signature signature(const Definitions& model);
std::set<std::string> id_set(const Definitions& model);

}  // namespace passflow::bpmn
