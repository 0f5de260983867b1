#include "passflow/engine/http.hpp"

#include <httplib.h>

#include "passflow/error.hpp"

namespace passflow::engine {

using runtime::Json;

int http_status(Errc code) {
  switch (code) {
    case Errc::NotFound:
    case Errc::UnknownRequestId: return 404;
    case Errc::DuplicateInstance: return 409;
    case Errc::MalformedXml:
    case Errc::MalformedRdf:
    case Errc::UnsupportedElement:
    case Errc::StructuralError:
    case Errc::InvariantViolation:
    case Errc::UnknownClass:
    case Errc::UnmappableElement:
    case Errc::DanglingMessageFlow:
    case Errc::CompileError:
    case Errc::UnsupportedConstruct:
    case Errc::ValidationError: return 422;
    case Errc::IoError: return 500;
    default: return 400;
  }
}

namespace {

enum class Role { None, User, Admin };

Json error_json(Errc code, const std::string& message, const std::vector<std::string>& details = {}) {
  return {{"error", to_string(code)}, {"message", message}, {"details", details}};
}

Json record_json(const ModelRecord& r) {
  Json subjects = Json::array();
  for (const auto& [id, p] : r.compiled->programs) {
    subjects.push_back({{"subjectId", id}, {"subjectLabel", p.subjectLabel}, {"isStartSubject", p.isStartSubject}});
  }
  return {{"modelId", r.modelId},
          {"name", r.name},
          {"kind", to_string(r.kind)},
          {"uploadedAt", r.uploadedAt},
          {"subjects", subjects}};
}

}  // namespace

struct HttpService::Impl {
  Engine& engine;
  AccessTokens tokens;
  httplib::Server server;

  Role role_of(const httplib::Request& req) const {
    if (tokens.admin.empty() && tokens.user.empty()) return Role::Admin;
    auto auth = req.get_header_value("Authorization");
    const std::string prefix = "Bearer ";
    if (auth.rfind(prefix, 0) != 0) return Role::None;
    auto token = auth.substr(prefix.size());
    if (!tokens.admin.empty() && token == tokens.admin) return Role::Admin;
    if (!tokens.user.empty() && token == tokens.user) return Role::User;
    return Role::None;
  }

  static void reply(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  // Runs `handler` if the caller holds `needed`, mapping library errors to
  // status codes.
  template <typename F>
  httplib::Server::Handler guarded(Role needed, F handler) {
    return [this, needed, handler](const httplib::Request& req, httplib::Response& res) {
      Role role = role_of(req);
      if (role == Role::None) return reply(res, 401, error_json(Errc::ValidationError, "missing or unknown token"));
      if (needed == Role::Admin && role != Role::Admin) {
        return reply(res, 403, error_json(Errc::ValidationError, "admin role required"));
      }
      try {
        handler(req, res);
      } catch (const Error& e) {
        reply(res, http_status(e.code()), error_json(e.code(), e.what(), e.details()));
      } catch (const Json::exception& e) {
        reply(res, 400, error_json(Errc::DecodeError, e.what()));
      }
    };
  }

  Impl(Engine& e, AccessTokens t) : engine(e), tokens(std::move(t)) {
    // httplib's default adds SO_REUSEPORT, which would let a second server
    // share a port that is already taken.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) { reply(res, 200, {{"status", "ok"}}); });

    server.Post("/models", guarded(Role::Admin, [this](const httplib::Request& req, httplib::Response& res) {
      std::string document;
      std::string kind = req.get_param_value("kind");
      std::string name = req.get_param_value("name");
      std::string filename;
      if (req.is_multipart_form_data()) {
        if (!req.has_file("file")) throw Error(Errc::ValidationError, "multipart upload needs a 'file' part");
        auto file = req.get_file_value("file");
        document = file.content;
        filename = file.filename;
        if (req.has_file("kind")) kind = req.get_file_value("kind").content;
        if (req.has_file("name")) name = req.get_file_value("name").content;
      } else {
        document = req.body;
      }
      if (kind.empty() && !filename.empty()) {
        if (auto guess = source_kind_from_path(filename)) kind = std::string(to_string(*guess));
      }
      auto record = engine.upload_model(std::move(document), source_kind_from_string(kind), name);
      reply(res, 201, record_json(record));
    }));

    server.Get("/models", guarded(Role::User, [this](const httplib::Request&, httplib::Response& res) {
      Json out = Json::array();
      for (const auto& r : engine.models()) out.push_back(record_json(r));
      reply(res, 200, out);
    }));

    server.Post(R"(/models/([^/]+)/instances)", guarded(Role::User, [this](const httplib::Request& req,
                                                                           httplib::Response& res) {
      Json body = req.body.empty() ? Json::object() : Json::parse(req.body);
      std::vector<std::string> started;
      auto id = engine.start_instance(req.matches[1], body.value("name", ""), &started);
      reply(res, 201, {{"instanceId", id}, {"startedSubjects", started}});
    }));

    server.Delete(R"(/instances/([^/]+))", guarded(Role::Admin, [this](const httplib::Request& req,
                                                                       httplib::Response& res) {
      engine.stop_instance(req.matches[1]);
      reply(res, 202, {{"instanceId", std::string(req.matches[1])}, {"stopping", true}});
    }));

    server.Get(R"(/instances/([^/]+)/status)", guarded(Role::User, [this](const httplib::Request& req,
                                                                          httplib::Response& res) {
      reply(res, 200, engine.status(req.matches[1]).to_json());
    }));

    server.Get("/tasks", guarded(Role::User, [this](const httplib::Request& req, httplib::Response& res) {
      std::optional<std::string> instance;
      if (req.has_param("instance")) instance = req.get_param_value("instance");
      Json out = Json::array();
      for (const auto& t : engine.list_tasks(instance)) out.push_back(t.to_json());
      reply(res, 200, out);
    }));

    server.Post(R"(/tasks/(\d+)/complete)", guarded(Role::User, [this](const httplib::Request& req,
                                                                       httplib::Response& res) {
      Json body = req.body.empty() ? Json::object() : Json::parse(req.body);
      auto id = std::stoull(req.matches[1]);
      engine.complete_task(id, body.value("values", Json::object()), body.value("choice", ""));
      reply(res, 200, {{"requestId", id}, {"completed", true}});
    }));
  }
};

HttpService::HttpService(Engine& engine, AccessTokens tokens)
    : impl_(std::make_unique<Impl>(engine, std::move(tokens))) {}

HttpService::~HttpService() = default;

int HttpService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpService::serve() { impl_->server.listen_after_bind(); }

void HttpService::stop() { impl_->server.stop(); }

}  // namespace passflow::engine
