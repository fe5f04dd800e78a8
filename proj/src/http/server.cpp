#include "ars/http/server.hpp"

#include "ars/http/live_stream.hpp"

#include "httplib.h"

#include <algorithm>
#include <cctype>
#include <memory>

namespace ars::http {
namespace {

ApiRequest to_api(const httplib::Request& req) {
  ApiRequest out;
  out.method = req.method;
  out.path = req.path;
  for (const auto& [k, v] : req.params) {
    out.query.emplace(k, v);
  }
  for (const auto& [k, v] : req.headers) {
    std::string key = k;
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out.headers.emplace(std::move(key), v);
  }
  out.body = req.body;
  return out;
}

void write_back(const ApiResponse& res, httplib::Response& out) {
  out.status = res.status;
  out.set_content(res.body, res.content_type);
}

} // namespace

HttpServer::HttpServer(Api& api) : api_(api), server_(std::make_unique<httplib::Server>()) {
  server_->Get(R"(/api/windows/([^/]+)/stats/stream)", [this](const httplib::Request& req,
                                                               httplib::Response& res) {
    const auto api_req = to_api(req);
    try {
      api_.require_teacher(api_req);
      const WindowId id(req.matches[1].str());
      api_.engine().window_view(id);
      auto stream = std::make_shared<LiveStatsStream>(api_.engine(), id, api_.options().refresh_interval);
      const auto width = api_.options().default_bar_width;
      res.set_header("Cache-Control", "no-cache");
      res.set_chunked_content_provider(
          "text/event-stream",
          [stream, width](std::size_t, httplib::DataSink& sink) {
            auto frame = stream->next();
            if (!frame) {
              sink.done();
              return true;
            }
            const auto text = frame->to_sse(width);
            if (!sink.write(text.data(), text.size())) {
              stream->cancel();
              return false;
            }
            if (frame->final) {
              sink.done();
            }
            return true;
          },
          [stream](bool) { stream->cancel(); });
    } catch (const Error& e) {
      write_back(error_response(e.code(), e.what()), res);
    }
  });

  const auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    write_back(api_.handle(to_api(req)), res);
  };
  server_->Get(".*", forward);
  server_->Post(".*", forward);
  server_->Patch(".*", forward);
  server_->Put(".*", forward);
  server_->Delete(".*", forward);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = server_->bind_to_any_port(host);
    if (bound < 0) {
      throw Error(ErrorCode::InvalidConfig, "cannot bind " + host);
    }
    return bound;
  }
  if (!server_->bind_to_port(host, port)) {
    throw Error(ErrorCode::InvalidConfig, "cannot bind " + host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { server_->listen_after_bind(); }

void HttpServer::stop() {
  if (server_ && server_->is_running()) {
    server_->stop();
  }
}

} // namespace ars::http
