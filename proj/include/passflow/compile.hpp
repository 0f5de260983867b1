#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "passflow/duration.hpp"
#include "passflow/pass.hpp"

namespace passflow::compile {

enum class TriggerKind { Internal, Message, UserChoice };
std::string_view to_string(TriggerKind kind);

/// `match` is the exchange id for message triggers, the choice label for
/// user choices and empty for internal triggers.
struct Trigger {
  TriggerKind kind = TriggerKind::Internal;
  std::string match;
  std::string targetStateId;
  std::string transitionId;
  friend bool operator==(const Trigger&, const Trigger&) = default;
};

struct Timeout {
  Duration duration;
  std::string targetStateId;
  std::string transitionId;
  friend bool operator==(const Timeout&, const Timeout&) = default;
};

struct InteractionEffect {
  std::vector<pass::StateField> fields;
  std::vector<std::string> choices;
  friend bool operator==(const InteractionEffect&, const InteractionEffect&) = default;
};

struct SendEffect {
  std::string exchangeId;
  std::string recipient;
  std::vector<pass::BusinessField> payloadTemplate;
  friend bool operator==(const SendEffect&, const SendEffect&) = default;
};

struct ExitEffect {
  friend bool operator==(const ExitEffect&, const ExitEffect&) = default;
};

using Effect = std::variant<std::monostate, InteractionEffect, SendEffect, ExitEffect>;

struct CompiledState {
  std::string id;
  std::string label;
  pass::StateKind kind = pass::StateKind::Do;
  bool isEnd = false;
  Effect onEnter;
  std::vector<Trigger> triggers;
  std::optional<Timeout> timeout;
  friend bool operator==(const CompiledState&, const CompiledState&) = default;
};

struct BehaviorProgram {
  std::string subjectId;
  std::string subjectLabel;
  bool isStartSubject = false;
  std::string modelName;
  std::string targetSystem;
  std::string initialStateId;
  std::map<std::string, CompiledState> states;

  const CompiledState& state(std::string_view id) const;
  friend bool operator==(const BehaviorProgram&, const BehaviorProgram&) = default;
};

struct CatalogEntry {
  std::string exchangeId;
  std::string specLabel;
  std::string sender;
  std::string receiver;
  std::vector<pass::BusinessField> payloadFields;
  friend bool operator==(const CatalogEntry&, const CatalogEntry&) = default;
};

struct MessageCatalog {
  std::map<std::string, CatalogEntry> entries;  // keyed by exchange id
  friend bool operator==(const MessageCatalog&, const MessageCatalog&) = default;
};

inline constexpr std::string_view kDefaultSystem = "server";

struct CompileOptions {
  std::string defaultSystem{kDefaultSystem};
  std::map<std::string, std::string> placement;  // subject id -> actor system
};

struct CompiledModel {
  std::map<std::string, BehaviorProgram> programs;  // keyed by subject id
  MessageCatalog catalog;
  friend bool operator==(const CompiledModel&, const CompiledModel&) = default;
};

/// Throws Error{CompileError} for invalid models and unreachable states
/// (details list every unreachable state), Error{UnsupportedConstruct} for
/// constructs the runtime cannot interpret.
CompiledModel compile(const pass::PassModel& model, const CompileOptions& options = {});

/// Canonical, line-oriented text encoding; see docs/program-format.md.
std::string serialize(const BehaviorProgram& program);
BehaviorProgram deserialize_program(std::string_view text);
std::string serialize(const MessageCatalog& catalog);
MessageCatalog deserialize_catalog(std::string_view text);

}  // namespace passflow::compile
