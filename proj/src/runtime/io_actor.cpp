#include "passflow/runtime/io_actor.hpp"

#include <algorithm>
#include <chrono>

namespace passflow::runtime {

bool valid_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  using namespace std::chrono;
  year_month_day ymd{year{std::stoi(text.substr(0, 4))}, month{static_cast<unsigned>(std::stoi(text.substr(5, 2)))},
                     day{static_cast<unsigned>(std::stoi(text.substr(8, 2)))}};
  return ymd.ok();
}

Json InteractionRequest::to_json() const {
  Json fs = Json::array();
  for (const auto& f : fields) {
    fs.push_back({{"name", f.name},
                  {"displayName", f.displayName},
                  {"fieldType", pass::to_string(f.fieldType)},
                  {"readOnly", f.readOnly},
                  {"value", f.value}});
  }
  return Json{{"requestId", requestId},
              {"requester", runtime::to_json(requester)},
              {"fields", fs},
              {"choices", choices},
              {"context",
               {{"instanceId", context.instanceId},
                {"instanceName", context.instanceName},
                {"modelName", context.modelName},
                {"subjectId", context.subjectId},
                {"subjectLabel", context.subjectLabel},
                {"stateId", context.stateId},
                {"stateLabel", context.stateLabel}}}};
}

Json InteractionRequest::to_body() const {
  Json j = to_json();
  j.erase("requestId");
  j.erase("requester");
  j["epoch"] = epoch;
  return j;
}

InteractionRequest InteractionRequest::from_body(const Json& body) {
  InteractionRequest r;
  try {
    for (const auto& f : body.at("fields")) {
      auto type = pass::field_type_from_string(f.at("fieldType").get<std::string>());
      if (!type) throw Error(Errc::DecodeError, "unknown field type in interaction request");
      r.fields.push_back({f.at("name").get<std::string>(), f.at("displayName").get<std::string>(), *type,
                          f.at("readOnly").get<bool>(), f.value("value", Json())});
    }
    r.choices = body.at("choices").get<std::vector<std::string>>();
    const auto& c = body.at("context");
    r.context = {c.at("instanceId").get<std::string>(), c.at("instanceName").get<std::string>(),
                 c.at("modelName").get<std::string>(),  c.at("subjectId").get<std::string>(),
                 c.at("subjectLabel").get<std::string>(), c.at("stateId").get<std::string>(),
                 c.at("stateLabel").get<std::string>()};
    r.epoch = body.at("epoch").get<std::uint64_t>();
  } catch (const Json::exception& e) {
    throw Error(Errc::DecodeError, std::string("malformed interaction request: ") + e.what());
  }
  return r;
}

void IoActor::receive(const EngineMessage& message) {
  switch (message.type) {
    case MessageType::IoRequest: {
      InteractionRequest r;
      try {
        r = InteractionRequest::from_body(message.body);
      } catch (const Error& e) {
        system().trace(this, message.instanceId, "", "malformedMessage", {{"type", "iorequest"}, {"error", e.what()}});
        return;
      }
      r.requestId = next_id_++;
      r.requester = message.sender;
      system().trace(this, r.context.instanceId, r.context.subjectId, "taskCreated",
                     {{"requestId", r.requestId}, {"state", r.context.stateId}});
      EngineMessage ack{MessageType::IoAck, message.instanceId, {}, {{"requestId", r.requestId}, {"epoch", r.epoch}}};
      requests_.emplace(r.requestId, std::move(r));
      send(message.sender, std::move(ack));
      break;
    }
    case MessageType::IoCancel: {
      std::optional<std::uint64_t> id;
      if (message.body.contains("requestId") && message.body["requestId"].is_number_unsigned()) {
        id = message.body["requestId"].get<std::uint64_t>();
      }
      cancel_from(message.sender, id);
      break;
    }
    default:
      break;
  }
}

void IoActor::cancel_from(const ActorAddress& requester, std::optional<std::uint64_t> requestId) {
  for (auto it = requests_.begin(); it != requests_.end();) {
    if (it->second.requester == requester && (!requestId || *requestId == it->first)) {
      system().trace(this, it->second.context.instanceId, it->second.context.subjectId, "taskCancelled",
                     {{"requestId", it->first}, {"state", it->second.context.stateId}});
      it = requests_.erase(it);
    } else {
      ++it;
    }
  }
}

std::vector<InteractionRequest> IoActor::pending(const std::optional<std::string>& instanceId) const {
  std::vector<InteractionRequest> out;
  for (const auto& [id, r] : requests_) {
    if (!instanceId || r.context.instanceId == *instanceId) out.push_back(r);
  }
  return out;
}

const InteractionRequest& IoActor::request(std::uint64_t requestId) const {
  auto it = requests_.find(requestId);
  if (it == requests_.end()) {
    throw Error(Errc::UnknownRequestId, "no pending request " + std::to_string(requestId),
                {std::to_string(requestId)});
  }
  return it->second;
}

void IoActor::complete(std::uint64_t requestId, const Json& values, const std::string& choice) {
  const InteractionRequest& r = request(requestId);
  std::string picked = choice;
  if (picked.empty() && r.choices.size() == 1) picked = r.choices.front();
  if (!r.choices.empty() && std::find(r.choices.begin(), r.choices.end(), picked) == r.choices.end()) {
    throw Error(Errc::ValidationError, "'" + picked + "' is not one of the offered choices", r.choices);
  }
  if (r.choices.empty() && !picked.empty()) {
    throw Error(Errc::ValidationError, "this task offers no choices", {picked});
  }
  Json accepted = Json::object();
  if (!values.is_null() && !values.is_object()) throw Error(Errc::ValidationError, "values must be an object");
  std::vector<std::string> problems;
  if (values.is_object()) {
    for (const auto& [key, value] : values.items()) {
      auto f = std::find_if(r.fields.begin(), r.fields.end(), [&](const FormField& x) { return x.name == key; });
      if (f == r.fields.end()) {
        problems.push_back(key + ": not a field of this form");
      } else if (f->readOnly) {
        problems.push_back(key + ": read-only");
      } else {
        bool ok = false;
        switch (f->fieldType) {
          case pass::FieldType::Integer: ok = value.is_number_integer(); break;
          case pass::FieldType::String: ok = value.is_string(); break;
          case pass::FieldType::Date: ok = value.is_string() && valid_date(value.get<std::string>()); break;
        }
        if (!ok) problems.push_back(key + ": expected " + std::string(pass::to_string(f->fieldType)));
        accepted[key] = value;
      }
    }
  }
  for (const auto& f : r.fields) {
    if (!f.readOnly && !accepted.contains(f.name)) problems.push_back(f.name + ": required");
  }
  if (!problems.empty()) throw Error(Errc::ValidationError, "task values rejected", problems);

  system().trace(this, r.context.instanceId, r.context.subjectId, "taskCompleted",
                 {{"requestId", requestId}, {"state", r.context.stateId}, {"choice", picked}});
  send(r.requester, {MessageType::IoComplete,
                     r.context.instanceId,
                     {},
                     {{"requestId", requestId}, {"values", accepted}, {"choice", picked}, {"epoch", r.epoch}}});
  requests_.erase(requestId);
}

}  // namespace passflow::runtime
