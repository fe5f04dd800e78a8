#include "ars/http/config.hpp"

#include "ars/error.hpp"
#include "ars/persistence.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>

namespace ars::http {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::int64_t to_int(const std::string& key, const std::string& value) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw Error(ErrorCode::InvalidConfig, key + " must be an integer, got '" + value + "'");
  }
  return v;
}

bool to_bool(const std::string& key, std::string value) {
  std::transform(value.begin(), value.end(), value.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw Error(ErrorCode::InvalidConfig, key + " must be a boolean, got '" + value + "'");
}

constexpr std::string_view kKeys[] = {"BIND_ADDR",       "DATA_DIR",    "TEACHER_PASSWORD_HASH",
                                      "REFRESH_INTERVAL_MS", "SESSION_TTL_MIN", "WEB_ROOT",
                                      "FSYNC",           "SUBMIT_CAP"};

void apply(ServiceConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "BIND_ADDR") {
    const auto colon = value.rfind(':');
    if (colon == std::string::npos) {
      throw Error(ErrorCode::InvalidConfig, "BIND_ADDR must be host:port");
    }
    cfg.bind_host = value.substr(0, colon);
    const auto port = to_int(key, value.substr(colon + 1));
    if (port < 0 || port > 65535) {
      throw Error(ErrorCode::InvalidConfig, "BIND_ADDR port out of range");
    }
    cfg.bind_port = static_cast<int>(port);
  } else if (key == "DATA_DIR") {
    cfg.data_dir = value;
  } else if (key == "TEACHER_PASSWORD_HASH") {
    cfg.teacher_password_hash = value;
  } else if (key == "REFRESH_INTERVAL_MS") {
    const auto ms = to_int(key, value);
    if (ms < 1) throw Error(ErrorCode::InvalidConfig, "REFRESH_INTERVAL_MS must be >= 1");
    cfg.refresh_interval = Millis{ms};
  } else if (key == "SESSION_TTL_MIN") {
    const auto min = to_int(key, value);
    if (min < 1) throw Error(ErrorCode::InvalidConfig, "SESSION_TTL_MIN must be >= 1");
    cfg.session_ttl = std::chrono::minutes{min};
  } else if (key == "WEB_ROOT") {
    cfg.web_root = value;
  } else if (key == "FSYNC") {
    cfg.fsync = to_bool(key, value);
  } else if (key == "SUBMIT_CAP") {
    const auto cap = to_int(key, value);
    if (cap < 1) throw Error(ErrorCode::InvalidConfig, "SUBMIT_CAP must be >= 1");
    cfg.submit_cap = static_cast<int>(cap);
  } else {
    throw Error(ErrorCode::InvalidConfig, "unknown config key " + key);
  }
}

} // namespace

EnvLookup process_env() {
  return [](const std::string& key) -> std::optional<std::string> {
    if (const char* v = std::getenv(key.c_str())) {
      return std::string(v);
    }
    return std::nullopt;
  };
}

ServiceConfig parse_config(std::string_view text, const EnvLookup& env) {
  ServiceConfig cfg;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(line.substr(0, eq)));
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    apply(cfg, key, std::string(trim(line.substr(eq + 1))));
  }
  if (env) {
    for (auto key : kKeys) {
      if (auto v = env(std::string(key))) {
        apply(cfg, std::string(key), *v);
      }
    }
  }
  return cfg;
}

ServiceConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  if (!file) {
    return parse_config("", env);
  }
  try {
    return parse_config(read_file(*file), env);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotFound) {
      throw Error(ErrorCode::InvalidConfig, e.what());
    }
    throw;
  }
}

} // namespace ars::http
