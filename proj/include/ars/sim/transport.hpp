#pragma once

#include "ars/http/api.hpp"

#include <memory>
#include <string>

namespace ars::sim {

/// One request/response exchange with an audience response server.
class Transport {
public:
  virtual ~Transport() = default;
  /// Throws Error(TargetUnreachable) when no response could be obtained.
  virtual http::ApiResponse call(const http::ApiRequest& req) = 0;
};

/// In-process: requests go straight to Api::handle, no sockets.
class LoopbackTransport final : public Transport {
public:
  explicit LoopbackTransport(http::Api& api) : api_(api) {}
  http::ApiResponse call(const http::ApiRequest& req) override { return api_.handle(req); }

private:
  http::Api& api_;
};

/// HTTP/1.1 to "http://host:port". Safe for concurrent callers.
class HttpTransport final : public Transport {
public:
  explicit HttpTransport(std::string base_url);
  http::ApiResponse call(const http::ApiRequest& req) override;

private:
  std::string base_url_;
};

} // namespace ars::sim
