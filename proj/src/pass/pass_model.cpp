#include <algorithm>
#include <set>
#include <sstream>

#include "passflow/pass.hpp"

namespace passflow::pass {

std::string_view to_string(FieldType type) {
  switch (type) {
    case FieldType::Integer: return "integer";
    case FieldType::String: return "string";
    case FieldType::Date: return "date";
  }
  return "?";
}

std::optional<FieldType> field_type_from_string(std::string_view text) {
  if (text == "integer") return FieldType::Integer;
  if (text == "string") return FieldType::String;
  if (text == "date") return FieldType::Date;
  return std::nullopt;
}

std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Do: return "Do";
    case StateKind::Send: return "Send";
    case StateKind::Receive: return "Receive";
  }
  return "?";
}

std::string_view to_string(TransitionKind kind) {
  switch (kind) {
    case TransitionKind::Do: return "DoTransition";
    case TransitionKind::Send: return "SendTransition";
    case TransitionKind::Receive: return "ReceiveTransition";
    case TransitionKind::DayTimeTimer: return "DayTimeTimerTransition";
  }
  return "?";
}

const std::string& Transition::choice_label() const {
  if (const auto* c = std::get_if<DoCondition>(&condition); c && !c->label.empty()) return c->label;
  return componentLabel;
}

const State* SubjectBehavior::state(std::string_view id) const {
  for (const auto& s : states) {
    if (s.componentId == id) return &s;
  }
  return nullptr;
}

std::vector<const Transition*> SubjectBehavior::outgoing(std::string_view stateId) const {
  std::vector<const Transition*> out;
  for (const auto& t : transitions) {
    if (t.sourceState == stateId) out.push_back(&t);
  }
  return out;
}

const Subject* PassModel::subject(std::string_view id) const {
  for (const auto& s : subjects) {
    if (s.componentId == id) return &s;
  }
  return nullptr;
}

const MessageExchange* PassModel::exchange(std::string_view id) const {
  for (const auto& e : messageExchangeList) {
    if (e.componentId == id) return &e;
  }
  return nullptr;
}

const MessageSpecification* PassModel::specification(std::string_view id) const {
  for (const auto& s : messageSpecifications) {
    if (s.componentId == id) return &s;
  }
  return nullptr;
}

bool ValidationReport::has_errors() const {
  return std::any_of(findings.begin(), findings.end(),
                     [](const Finding& f) { return f.severity == Severity::Error; });
}

std::string ValidationReport::to_string() const {
  std::ostringstream out;
  for (const auto& f : findings) {
    out << (f.severity == Severity::Error ? "error" : "warning") << " [" << f.rule << "] " << f.componentId << ": "
        << f.message << '\n';
  }
  return out.str();
}

}  // namespace passflow::pass
