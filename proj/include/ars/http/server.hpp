#pragma once

#include "ars/http/api.hpp"

#include <memory>
#include <string>

namespace httplib {
class Server;
}

namespace ars::http {

/// cpp-httplib adapter around Api, plus the server-sent-events route.
class HttpServer {
public:
  explicit HttpServer(Api& api);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Port 0 picks a free port. Returns the bound port or throws.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void listen();
  void stop();

private:
  Api& api_;
  std::unique_ptr<httplib::Server> server_;
};

} // namespace ars::http
