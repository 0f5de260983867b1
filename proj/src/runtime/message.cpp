#include "passflow/runtime/message.hpp"

#include <array>
#include <utility>

#include "passflow/error.hpp"

namespace passflow::runtime {

namespace {

constexpr std::array<std::pair<MessageType, std::string_view>, 14> kTypeNames{{
    {MessageType::Register, "register"},
    {MessageType::Deregister, "deregister"},
    {MessageType::Addressbook, "addressbook"},
    {MessageType::Init, "init"},
    {MessageType::Process, "process"},
    {MessageType::IoRequest, "iorequest"},
    {MessageType::IoAck, "ioack"},
    {MessageType::IoComplete, "iocomplete"},
    {MessageType::IoCancel, "iocancel"},
    {MessageType::Wakeup, "wakeup"},
    {MessageType::Exit, "exit"},
    {MessageType::Transition, "transition"},
    {MessageType::Start, "start"},
    {MessageType::Stop, "stop"},
}};

}  // namespace

std::string ActorAddress::to_string() const { return system + "/" + std::to_string(id); }

Json to_json(const ActorAddress& address) { return Json{{"id", address.id}, {"system", address.system}}; }

ActorAddress address_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("id") || !j["id"].is_number_integer() || j["id"].get<std::int64_t>() < 0 ||
      !j.contains("system") || !j["system"].is_string()) {
    throw Error(Errc::DecodeError, "malformed actor address: " + j.dump());
  }
  return {j["id"].get<std::uint64_t>(), j["system"].get<std::string>()};
}

std::string_view to_string(MessageType type) {
  for (const auto& [t, name] : kTypeNames) {
    if (t == type) return name;
  }
  return "?";
}

std::optional<MessageType> message_type_from_string(std::string_view text) {
  for (const auto& [t, name] : kTypeNames) {
    if (name == text) return t;
  }
  return std::nullopt;
}

Json encode(const EngineMessage& message) {
  Json j{{"type", to_string(message.type)}, {"sender", to_json(message.sender)}, {"body", message.body}};
  if (!message.instanceId.empty()) j["instanceId"] = message.instanceId;
  return j;
}

EngineMessage decode(const Json& j) {
  if (!j.is_object()) throw Error(Errc::DecodeError, "engine message must be an object");
  if (!j.contains("type") || !j["type"].is_string()) throw Error(Errc::DecodeError, "engine message has no type key");
  auto type = message_type_from_string(j["type"].get<std::string>());
  if (!type) throw Error(Errc::DecodeError, "unknown message type '" + j["type"].get<std::string>() + "'");
  EngineMessage m;
  m.type = *type;
  if (!j.contains("sender")) throw Error(Errc::DecodeError, "engine message has no sender");
  m.sender = address_from_json(j["sender"]);
  if (j.contains("instanceId")) {
    if (!j["instanceId"].is_string()) throw Error(Errc::DecodeError, "instanceId must be a string");
    m.instanceId = j["instanceId"].get<std::string>();
  }
  bool bootstrap = m.type == MessageType::Addressbook || m.type == MessageType::Start ||
                   m.type == MessageType::IoComplete || m.type == MessageType::IoRequest ||
                   m.type == MessageType::IoAck || m.type == MessageType::IoCancel;
  if (m.instanceId.empty() && !bootstrap) {
    throw Error(Errc::DecodeError, std::string("'") + std::string(to_string(m.type)) + "' message needs an instanceId");
  }
  if (j.contains("body")) {
    if (!j["body"].is_object()) throw Error(Errc::DecodeError, "body must be an object");
    m.body = j["body"];
  }
  return m;
}

}  // namespace passflow::runtime
