#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "passflow/duration.hpp"

namespace passflow::pass {

enum class FieldType { Integer, String, Date };
std::string_view to_string(FieldType type);
std::optional<FieldType> field_type_from_string(std::string_view text);

struct BusinessField {
  std::string name;
  std::string displayName;
  FieldType fieldType = FieldType::String;
  friend bool operator==(const BusinessField&, const BusinessField&) = default;
};

/// A field a do-state reads or writes (its data access mapping).
struct StateField {
  BusinessField field;
  bool readOnly = false;
  friend bool operator==(const StateField&, const StateField&) = default;
};

struct Subject {
  std::string componentId;
  std::string componentLabel;
  bool isStartSubject = false;
  friend bool operator==(const Subject&, const Subject&) = default;
};

struct MessageSpecification {
  std::string componentId;
  std::string componentLabel;
  std::vector<BusinessField> payloadFields;
  friend bool operator==(const MessageSpecification&, const MessageSpecification&) = default;
};

struct MessageExchange {
  std::string componentId;
  std::string componentLabel;
  std::string sender;
  std::string receiver;
  std::string messageSpec;
  friend bool operator==(const MessageExchange&, const MessageExchange&) = default;
};

enum class StateKind { Do, Send, Receive };
std::string_view to_string(StateKind kind);

struct State {
  std::string componentId;
  std::string componentLabel;
  StateKind kind = StateKind::Do;
  bool isInitial = false;
  bool isEnd = false;
  std::string actionId;
  std::vector<StateField> dataFields;
  /// Kind of the element this state was translated from, when known
  /// (e.g. "ExclusiveGateway"); empty for natively authored states.
  std::string originKind;
  friend bool operator==(const State&, const State&) = default;
};

enum class TransitionKind { Do, Send, Receive, DayTimeTimer };
std::string_view to_string(TransitionKind kind);

struct DoCondition {
  std::string componentId;
  std::string label;
  friend bool operator==(const DoCondition&, const DoCondition&) = default;
};

struct SendCondition {
  std::string componentId;
  std::string messageExchange;
  std::string messageSentTo;
  friend bool operator==(const SendCondition&, const SendCondition&) = default;
};

struct ReceiveCondition {
  std::string componentId;
  std::string messageExchange;
  std::string messageSentFrom;
  friend bool operator==(const ReceiveCondition&, const ReceiveCondition&) = default;
};

struct TimerCondition {
  std::string componentId;
  Duration duration;
  friend bool operator==(const TimerCondition&, const TimerCondition&) = default;
};

using TransitionCondition = std::variant<std::monostate, DoCondition, SendCondition, ReceiveCondition, TimerCondition>;

/// Records the catch event (and the flow into it) that a receive or timer
/// transition absorbed when it was a branch of an event-based gateway.
struct GatewayBranch {
  std::string eventId;
  std::string eventLabel;
  std::string entryFlowId;
  std::string entryFlowLabel;
  friend bool operator==(const GatewayBranch&, const GatewayBranch&) = default;
};

struct Transition {
  std::string componentId;
  std::string componentLabel;
  TransitionKind kind = TransitionKind::Do;
  std::string sourceState;
  std::string targetState;
  TransitionCondition condition;
  std::optional<GatewayBranch> branch;

  /// Label a user picks when this is one of several do-transitions: the
  /// condition label when present, otherwise the transition label.
  const std::string& choice_label() const;
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct SubjectBehavior {
  std::string componentId;
  std::string componentLabel;
  std::string subjectId;
  std::vector<State> states;
  std::vector<Transition> transitions;
  std::string initialStateId;

  const State* state(std::string_view id) const;
  std::vector<const Transition*> outgoing(std::string_view stateId) const;
  friend bool operator==(const SubjectBehavior&, const SubjectBehavior&) = default;
};

struct PassModel {
  std::string componentId;
  std::string componentLabel;
  std::string messageExchangeListId;
  std::vector<Subject> subjects;
  std::vector<MessageExchange> messageExchangeList;
  std::vector<MessageSpecification> messageSpecifications;
  std::map<std::string, SubjectBehavior> behaviors;  // keyed by subject id

  const Subject* subject(std::string_view id) const;
  const MessageExchange* exchange(std::string_view id) const;
  const MessageSpecification* specification(std::string_view id) const;
  friend bool operator==(const PassModel&, const PassModel&) = default;
};

enum class Severity { Error, Warning };

struct Finding {
  Severity severity = Severity::Error;
  std::string componentId;
  std::string rule;
  std::string message;
  friend auto operator<=>(const Finding&, const Finding&) = default;
};

struct ValidationReport {
  std::vector<Finding> findings;  // sorted, deduplicated

  bool ok() const { return findings.empty(); }
  bool has_errors() const;
  std::string to_string() const;
};

/// Checks SID/SBD completeness and structure. Never throws.
ValidationReport validate(const PassModel& model);

}  // namespace passflow::pass
