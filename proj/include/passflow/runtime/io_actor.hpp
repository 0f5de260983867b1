#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "passflow/pass.hpp"
#include "passflow/runtime/actor_system.hpp"

namespace passflow::runtime {

struct FormField {
  std::string name;
  std::string displayName;
  pass::FieldType fieldType = pass::FieldType::String;
  bool readOnly = false;
  Json value;  // current content of the business object, null if unset
};

struct InteractionContext {
  std::string instanceId;
  std::string instanceName;
  std::string modelName;
  std::string subjectId;
  std::string subjectLabel;
  std::string stateId;
  std::string stateLabel;
};

/// A pending human task.
struct InteractionRequest {
  std::uint64_t requestId = 0;
  ActorAddress requester;
  std::vector<FormField> fields;
  std::vector<std::string> choices;
  InteractionContext context;
  std::uint64_t epoch = 0;

  Json to_json() const;
  /// Body of an iorequest message. Throws Error{DecodeError}.
  static InteractionRequest from_body(const Json& body);
  Json to_body() const;
};

/// Brokers human interaction: process actors file requests, user
/// interfaces list and complete them.
class IoActor : public Actor {
 public:
  void receive(const EngineMessage& message) override;

  std::vector<InteractionRequest> pending(const std::optional<std::string>& instanceId = std::nullopt) const;
  /// Throws Error{UnknownRequestId}.
  const InteractionRequest& request(std::uint64_t requestId) const;
  /// Validates `values` against the form and routes them to the requester.
  /// Throws Error{UnknownRequestId} or Error{ValidationError}; a rejected
  /// completion leaves the request pending.
  void complete(std::uint64_t requestId, const Json& values, const std::string& choice);

 private:
  void cancel_from(const ActorAddress& requester, std::optional<std::uint64_t> requestId);

  std::map<std::uint64_t, InteractionRequest> requests_;
  std::uint64_t next_id_ = 1;
};

/// Checks a yyyy-mm-dd calendar date.
bool valid_date(const std::string& text);

}  // namespace passflow::runtime
