#include "ars/sim/transport.hpp"

#include "httplib.h"

namespace ars::sim {

HttpTransport::HttpTransport(std::string base_url) : base_url_(std::move(base_url)) {
  while (!base_url_.empty() && base_url_.back() == '/') {
    base_url_.pop_back();
  }
}

http::ApiResponse HttpTransport::call(const http::ApiRequest& req) {
  // A client per call: httplib::Client is not meant for concurrent use.
  httplib::Client client(base_url_);
  client.set_connection_timeout(5);
  client.set_read_timeout(60);

  httplib::Headers headers;
  for (const auto& [k, v] : req.headers) {
    headers.emplace(k, v);
  }
  httplib::Params params(req.query.begin(), req.query.end());
  const auto path = params.empty() ? req.path : httplib::append_query_params(req.path, params);

  httplib::Result res{nullptr, httplib::Error::Unknown};
  if (req.method == "GET") {
    res = client.Get(path, headers);
  } else if (req.method == "POST") {
    res = client.Post(path, headers, req.body, "application/json");
  } else if (req.method == "PATCH") {
    res = client.Patch(path, headers, req.body, "application/json");
  } else {
    throw Error(ErrorCode::BadRequest, "unsupported method " + req.method);
  }
  if (!res) {
    throw Error(ErrorCode::TargetUnreachable,
                base_url_ + path + ": " + httplib::to_string(res.error()));
  }
  http::ApiResponse out;
  out.status = res->status;
  out.content_type = res->get_header_value("Content-Type");
  out.body = res->body;
  return out;
}

} // namespace ars::sim
