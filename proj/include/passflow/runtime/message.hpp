#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace passflow::runtime {

using Json = nlohmann::json;

/// Opaque actor handle. Ids are never reused within one actor system bus.
struct ActorAddress {
  std::uint64_t id = 0;
  std::string system;

  bool valid() const { return id != 0; }
  std::string to_string() const;
  friend auto operator<=>(const ActorAddress&, const ActorAddress&) = default;
};

Json to_json(const ActorAddress& address);
ActorAddress address_from_json(const Json& j);

enum class MessageType {
  Register,
  Deregister,
  Addressbook,
  Init,
  Process,
  IoRequest,
  IoAck,
  IoComplete,
  IoCancel,
  Wakeup,
  Exit,
  // Not part of the inter-actor protocol proper: an actor's message to
  // itself that performs a state transition, and the engine's requests to
  // the director.
  Transition,
  Start,
  Stop,
};

std::string_view to_string(MessageType type);
std::optional<MessageType> message_type_from_string(std::string_view text);

struct EngineMessage {
  MessageType type = MessageType::Process;
  std::string instanceId;  // empty only for system bootstrap traffic
  ActorAddress sender;
  Json body = Json::object();
};

/// JSON form used by the process-separated transport; see
/// docs/engine-message.schema.json.
Json encode(const EngineMessage& message);
/// Throws Error{DecodeError}.
EngineMessage decode(const Json& j);

}  // namespace passflow::runtime
