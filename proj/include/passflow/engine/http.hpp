#pragma once

#include <memory>
#include <string>

#include "passflow/engine/engine.hpp"

namespace passflow::engine {

/// Static two-role access: the admin token may do everything, the user
/// token everything except uploading models and stopping instances. With
/// no tokens configured the API is open.
struct AccessTokens {
  std::string admin;
  std::string user;
};

/// HTTP+JSON front of an Engine.
class HttpService {
 public:
  HttpService(Engine& engine, AccessTokens tokens = {});
  ~HttpService();

  /// Binds `port` (0 picks a free one). Returns the bound port, or -1 when
  /// the port is unavailable.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

int http_status(Errc code);

}  // namespace passflow::engine
