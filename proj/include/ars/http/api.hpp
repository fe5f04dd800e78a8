#pragma once

#include "ars/engine.hpp"
#include "ars/http/auth.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace ars::http {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  /// Lower-case header names.
  std::map<std::string, std::string> headers;
  std::string body;
};

struct ApiResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

struct ApiOptions {
  std::filesystem::path web_root;
  Millis refresh_interval{1000};
  /// Upper bound for long-poll waits on GET .../stats?after=V.
  Millis max_long_poll{30'000};
  std::int64_t default_bar_width = 100;
};

int http_status(ErrorCode code) noexcept;
/// `{ "error": "<MachineCode>", "detail": "<human text>" }`
ApiResponse error_response(ErrorCode code, std::string_view detail);

/// Transport-independent REST surface. Both the HTTP adapter and the
/// in-process loopback used by the simulator call handle().
class Api {
public:
  Api(Engine& engine, TeacherAuth& auth, ParticipantRegistry& participants, ApiOptions options);

  ApiResponse handle(const ApiRequest& req);

  /// Throws AuthRequired (missing/expired session) or Forbidden (a
  /// participant token presented as teacher credential).
  void require_teacher(const ApiRequest& req);

  Engine& engine() noexcept { return engine_; }
  const ApiOptions& options() const noexcept { return options_; }

private:
  ApiResponse route(const ApiRequest& req);
  bool is_teacher(const ApiRequest& req);

  ApiResponse login(const ApiRequest& req);
  ApiResponse create_question(const ApiRequest& req);
  ApiResponse edit_question(const ApiRequest& req, const std::string& id);
  ApiResponse list_questions(const ApiRequest& req);
  ApiResponse compose_group(const ApiRequest& req);
  ApiResponse set_group_state(const ApiRequest& req, const std::string& id);
  ApiResponse open_window(const ApiRequest& req, const std::string& id);
  ApiResponse close_window(const ApiRequest& req, const std::string& id);
  ApiResponse window_status(const ApiRequest& req, const std::string& id);
  ApiResponse issue_token(const ApiRequest& req, const std::string& id);
  ApiResponse submit(const ApiRequest& req, const std::string& id);
  ApiResponse stats(const ApiRequest& req, const std::string& id);
  ApiResponse stats_csv(const ApiRequest& req, const std::string& id);
  ApiResponse compare(const ApiRequest& req);
  ApiResponse publish(const ApiRequest& req, const std::string& id);
  ApiResponse static_page(const std::string& file);

  Engine& engine_;
  TeacherAuth& auth_;
  ParticipantRegistry& participants_;
  ApiOptions options_;
};

} // namespace ars::http
