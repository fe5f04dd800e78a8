#pragma once

#include "ars/clock.hpp"
#include "ars/error.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace ars::http {

struct ServiceConfig {
  std::string bind_host = "127.0.0.1";
  int bind_port = 8080;
  std::filesystem::path data_dir = "data";
  std::string teacher_password_hash;
  Millis refresh_interval{1000};
  std::chrono::minutes session_ttl{120};
  std::filesystem::path web_root = "web";
  bool fsync = true;
  int submit_cap = 256;
};

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;

EnvLookup process_env();

/// `KEY = value` lines, '#' comments. Keys: BIND_ADDR (host:port), DATA_DIR,
/// TEACHER_PASSWORD_HASH, REFRESH_INTERVAL_MS, SESSION_TTL_MIN, WEB_ROOT,
/// FSYNC, SUBMIT_CAP. Environment variables of the same names win.
/// Throws Error(InvalidConfig).
ServiceConfig parse_config(std::string_view text, const EnvLookup& env);
ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env);

} // namespace ars::http
