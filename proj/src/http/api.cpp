#include "ars/http/api.hpp"

#include "ars/codec.hpp"

#include <fstream>
#include <sstream>
#include <thread>

namespace ars::http {
namespace {

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto slash = path.find('/');
    parts.emplace_back(path.substr(0, slash));
    path = slash == std::string_view::npos ? std::string_view{} : path.substr(slash);
  }
  return parts;
}

ApiResponse json_response(int status, const json& body) {
  return ApiResponse{status, "application/json", body.dump()};
}

json parse_body(const ApiRequest& req) {
  if (req.body.empty()) {
    return json::object();
  }
  auto body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw Error(ErrorCode::BadRequest, "request body must be a JSON object");
  }
  return body;
}

std::optional<std::string> header(const ApiRequest& req, const std::string& name) {
  const auto it = req.headers.find(name);
  if (it == req.headers.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::optional<std::string> query(const ApiRequest& req, const std::string& name) {
  const auto it = req.query.find(name);
  if (it == req.query.end()) {
    return std::nullopt;
  }
  return it->second;
}

std::optional<std::string> bearer(const ApiRequest& req) {
  const auto auth = header(req, "authorization");
  constexpr std::string_view prefix = "Bearer ";
  if (!auth || !auth->starts_with(prefix)) {
    return std::nullopt;
  }
  return auth->substr(prefix.size());
}

std::int64_t query_int(const ApiRequest& req, const std::string& name, std::int64_t fallback) {
  const auto v = query(req, name);
  if (!v) {
    return fallback;
  }
  try {
    std::size_t used = 0;
    const auto n = std::stoll(*v, &used);
    if (used != v->size()) {
      throw std::invalid_argument(name);
    }
    return n;
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadRequest, name + " must be an integer");
  }
}

bool query_flag(const ApiRequest& req, const std::string& name) {
  const auto v = query(req, name);
  return v && (*v == "1" || *v == "true");
}

std::vector<std::string> string_list(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_array()) {
    throw Error(ErrorCode::BadRequest, std::string(key) + " must be an array of strings");
  }
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) {
      throw Error(ErrorCode::BadRequest, std::string(key) + " must be an array of strings");
    }
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::string required_string(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw Error(ErrorCode::BadRequest, std::string(key) + " must be a string");
  }
  return it->get<std::string>();
}

json window_json(const WindowView& view, bool teacher) {
  json w = view.window;
  if (!teacher) {
    w.erase("join_code");
  }
  if (const auto d = view.window.deadline()) {
    w["deadline"] = format_iso(*d);
  } else {
    w["deadline"] = nullptr;
  }
  return w;
}

StatsFilter window_filter(const ApiRequest& req, const std::string& id, bool live_default) {
  StatsFilter f;
  f.window_id = WindowId(id);
  f.include_live = req.query.contains("live") ? query_flag(req, "live") : live_default;
  const auto from = query(req, "from");
  const auto to = query(req, "to");
  if (from || to) {
    f.time_range = TimeRange{from ? parse_iso(*from) : Instant{Millis{std::numeric_limits<std::int64_t>::min() / 2}},
                             to ? parse_iso(*to) : Instant{Millis{std::numeric_limits<std::int64_t>::max() / 2}}};
  }
  return f;
}

constexpr std::string_view kPlaceholderPage =
    "<!doctype html><html><head><meta charset=\"utf-8\"><title>Audience response</title></head>"
    "<body><p>The web interface is not installed on this server. The REST API is available "
    "under /api/.</p></body></html>";

} // namespace

int http_status(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::AuthRequired:
  case ErrorCode::BadCredential:
    return 401;
  case ErrorCode::Forbidden:
  case ErrorCode::BadJoinCode:
    return 403;
  case ErrorCode::UnknownQuestion:
  case ErrorCode::UnknownGroup:
  case ErrorCode::UnknownWindow:
  case ErrorCode::NotFound:
    return 404;
  case ErrorCode::GroupLocked:
  case ErrorCode::WindowAlreadyOpen:
  case ErrorCode::WindowClosed:
  case ErrorCode::AlreadyClosed:
    return 409;
  case ErrorCode::RateLimited:
    return 429;
  case ErrorCode::StorageFull:
    return 507;
  case ErrorCode::SerializationFailure:
  case ErrorCode::CorruptRecord:
  case ErrorCode::SnapshotOffsetMismatch:
  case ErrorCode::InvalidConfig:
  case ErrorCode::TargetUnreachable:
  case ErrorCode::AuthFailed:
  case ErrorCode::OracleMismatch:
    return 500;
  default:
    return 422;
  }
}

ApiResponse error_response(ErrorCode code, std::string_view detail) {
  return json_response(http_status(code),
                       json{{"error", to_string(code)}, {"detail", std::string(detail)}});
}

Api::Api(Engine& engine, TeacherAuth& auth, ParticipantRegistry& participants, ApiOptions options)
    : engine_(engine), auth_(auth), participants_(participants), options_(std::move(options)) {}

ApiResponse Api::handle(const ApiRequest& req) {
  try {
    return route(req);
  } catch (const Error& e) {
    return error_response(e.code(), e.what());
  } catch (const json::exception& e) {
    return error_response(ErrorCode::BadRequest, e.what());
  }
}

bool Api::is_teacher(const ApiRequest& req) {
  const auto token = bearer(req);
  return token && auth_.is_valid(*token);
}

void Api::require_teacher(const ApiRequest& req) {
  const auto token = bearer(req);
  if (!token) {
    throw Error(ErrorCode::AuthRequired, "teacher session required");
  }
  if (auth_.is_valid(*token)) {
    return;
  }
  if (participants_.find(*token)) {
    throw Error(ErrorCode::Forbidden, "participant tokens cannot be used here");
  }
  throw Error(ErrorCode::AuthRequired, "teacher session missing or expired");
}

ApiResponse Api::route(const ApiRequest& req) {
  const auto parts = split_path(req.path);
  const auto& m = req.method;
  const auto n = parts.size();

  if (n == 0 && m == "GET") return static_page("index.html");
  if (n == 1 && parts[0] == "teach" && m == "GET") return static_page("teach.html");
  if (n < 2 || parts[0] != "api") {
    throw Error(ErrorCode::NotFound, "no route for " + m + " " + req.path);
  }

  const auto& res = parts[1];
  if (res == "auth" && n == 3 && parts[2] == "login" && m == "POST") return login(req);
  if (res == "questions") {
    if (n == 2 && m == "POST") return create_question(req);
    if (n == 2 && m == "GET") return list_questions(req);
    if (n == 3 && m == "PATCH") return edit_question(req, parts[2]);
  }
  if (res == "groups" && n == 2 && m == "POST") return compose_group(req);
  if (res == "groups" && n == 4) {
    if (parts[3] == "state" && m == "POST") return set_group_state(req, parts[2]);
    if (parts[3] == "windows" && m == "POST") return open_window(req, parts[2]);
  }
  if (res == "windows" && n >= 4) {
    const auto& id = parts[2];
    const auto& action = parts[3];
    if (n == 4) {
      if (action == "close" && m == "POST") return close_window(req, id);
      if (action == "status" && m == "GET") return window_status(req, id);
      if (action == "token" && m == "POST") return issue_token(req, id);
      if (action == "submit" && m == "POST") return submit(req, id);
      if (action == "stats" && m == "GET") return stats(req, id);
      if (action == "stats.csv" && m == "GET") return stats_csv(req, id);
      if (action == "publish" && m == "POST") return publish(req, id);
    }
    if (n == 5 && action == "stats" && parts[4] == "stream" && m == "GET") {
      // Streaming needs a transport; without one, serve the long-poll form.
      require_teacher(req);
      return stats(req, id);
    }
  }
  if (res == "stats" && n == 3 && parts[2] == "compare" && m == "GET") return compare(req);
  throw Error(ErrorCode::NotFound, "no route for " + m + " " + req.path);
}

ApiResponse Api::login(const ApiRequest& req) {
  const auto body = parse_body(req);
  const auto it = body.find("password");
  const std::string password = it != body.end() && it->is_string() ? it->get<std::string>() : "";
  const auto session = auth_.login(password);
  return json_response(200, {{"token", session.token}, {"expires_at", format_iso(session.expires_at)}});
}

ApiResponse Api::create_question(const ApiRequest& req) {
  require_teacher(req);
  const auto body = parse_body(req);
  const auto kind = parse_choice_kind(body.value("kind", std::string("single")));
  const auto rev = engine_.make_question(body.value("text", std::string()), kind,
                                         string_list(body, "options"));
  return json_response(201, rev);
}

ApiResponse Api::edit_question(const ApiRequest& req, const std::string& id) {
  require_teacher(req);
  const auto body = parse_body(req);
  QuestionEdit edit;
  if (body.contains("text")) edit.text = required_string(body, "text");
  if (body.contains("kind")) edit.kind = parse_choice_kind(required_string(body, "kind"));
  if (body.contains("options")) edit.option_labels = string_list(body, "options");
  return json_response(200, engine_.edit_question(QuestionId(id), edit));
}

ApiResponse Api::list_questions(const ApiRequest& req) {
  require_teacher(req);
  return json_response(200, {{"questions", engine_.questions()}});
}

ApiResponse Api::compose_group(const ApiRequest& req) {
  require_teacher(req);
  const auto body = parse_body(req);
  std::vector<QuestionId> ids;
  for (auto& s : string_list(body, "question_ids")) {
    ids.emplace_back(std::move(s));
  }
  const auto visibility = parse_visibility(body.value("visibility", std::string("protected")));
  return json_response(201,
                       engine_.compose_group(body.value("title", std::string()), ids, visibility));
}

ApiResponse Api::set_group_state(const ApiRequest& req, const std::string& id) {
  require_teacher(req);
  const auto body = parse_body(req);
  return json_response(200, engine_.set_group_state(GroupId(id),
                                                    parse_group_state(required_string(body, "state"))));
}

ApiResponse Api::open_window(const ApiRequest& req, const std::string& id) {
  require_teacher(req);
  const auto body = parse_body(req);
  std::optional<std::chrono::seconds> duration;
  if (const auto it = body.find("duration_s"); it != body.end() && !it->is_null()) {
    if (!it->is_number_integer()) {
      throw Error(ErrorCode::BadRequest, "duration_s must be an integer or null");
    }
    duration = std::chrono::seconds{it->get<std::int64_t>()};
  }
  const auto window = engine_.open_window(GroupId(id), duration);
  const auto view = engine_.window_view(window.window_id);
  return json_response(201, window_json(view, true));
}

ApiResponse Api::close_window(const ApiRequest& req, const std::string& id) {
  require_teacher(req);
  return json_response(200, engine_.close_window(WindowId(id)));
}

ApiResponse Api::window_status(const ApiRequest& req, const std::string& id) {
  const bool teacher = is_teacher(req);
  const auto view = engine_.window_view(WindowId(id));
  const auto group = engine_.group(view.window.group_id);
  const auto state = engine_.state_copy();

  json questions = json::array();
  for (const auto& item : group.items) {
    questions.push_back(state.pool.revision(item.question_id, item.revision));
  }
  json out{{"window", window_json(view, teacher)},
           {"state", to_string(view.status.state)},
           {"respondent_count", view.status.respondent_count},
           {"version", view.version},
           {"published", view.window.published},
           {"group",
            {{"group_id", group.group_id},
             {"title", group.title},
             {"visibility", to_string(group.visibility)},
             {"questions", std::move(questions)}}}};
  if (view.status.remaining) {
    out["remaining_ms"] = view.status.remaining->count();
    out["remaining_s"] = static_cast<double>(view.status.remaining->count()) / 1000.0;
  } else {
    out["remaining_ms"] = nullptr;
    out["remaining_s"] = nullptr;
  }
  if (view.window.published) {
    StatsFilter f;
    f.window_id = view.window.window_id;
    f.include_live = true;
    const auto stats = ars::tabulate(state, f);
    out["results"] = {{"stats", stats}, {"bars", bar_layout(stats, options_.default_bar_width)}};
  }
  if (teacher) {
    if (const auto summary = state.sessions.get(view.window.window_id).summary) {
      out["summary"] = *summary;
    }
  }
  return json_response(200, out);
}

ApiResponse Api::issue_token(const ApiRequest& req, const std::string& id) {
  const auto body = parse_body(req);
  const auto view = engine_.window_view(WindowId(id));
  if (view.status.state != WindowState::Open) {
    throw Error(ErrorCode::WindowClosed, "window " + id + " is closed");
  }
  if (view.window.join_code) {
    const auto it = body.find("join_code");
    const std::string code = it != body.end() && it->is_string() ? it->get<std::string>() : "";
    if (!secure_equals(code, *view.window.join_code)) {
      throw Error(ErrorCode::BadJoinCode, "join code missing or wrong");
    }
  }
  const auto token = participants_.issue(view.window.window_id);
  return json_response(201, {{"token", token.token},
                             {"issued_at", format_iso(token.issued_at)},
                             {"window_id", id}});
}

ApiResponse Api::submit(const ApiRequest& req, const std::string& id) {
  const auto token_text = header(req, "x-participant-token");
  if (!token_text) {
    throw Error(ErrorCode::AuthRequired, "participant token required");
  }
  const auto token = participants_.find(*token_text);
  if (!token) {
    throw Error(ErrorCode::AuthRequired, "unknown participant token");
  }
  if (token->window_id && token->window_id->str() != id) {
    throw Error(ErrorCode::Forbidden, "token was issued for another window");
  }
  const auto body = parse_body(req);
  Submission sub;
  sub.participant_token = token->token;
  sub.window_id = WindowId(id);
  sub.question_id = QuestionId(required_string(body, "question_id"));
  for (auto& s : string_list(body, "options")) {
    sub.selected_options.emplace_back(std::move(s));
  }
  if (body.contains("client_note")) sub.client_note = required_string(body, "client_note");
  if (body.contains("idempotency_key")) sub.idempotency_key = required_string(body, "idempotency_key");
  if (!participants_.consume_submit(token->token)) {
    throw Error(ErrorCode::RateLimited, "submission cap reached for this token");
  }

  const auto receipt = engine_.submit(sub);
  if (!receipt.accepted) {
    auto res = error_response(*receipt.rejection, receipt.detail);
    auto body_json = json::parse(res.body);
    body_json["receipt"] = receipt;
    res.body = body_json.dump();
    return res;
  }
  return json_response(200, receipt);
}

ApiResponse Api::stats(const ApiRequest& req, const std::string& id) {
  require_teacher(req);
  const WindowId wid(id);
  engine_.sweep_expired();
  auto view = engine_.window_view(wid);
  if (const auto after = query(req, "after")) {
    const auto seen = static_cast<std::uint64_t>(query_int(req, "after", 0));
    const auto wait =
        std::clamp(Millis{query_int(req, "wait_ms", options_.max_long_poll.count())}, Millis{0},
                   options_.max_long_poll);
    const auto deadline = std::chrono::steady_clock::now() + wait;
    while (view.version == seen && view.window.state == WindowState::Open) {
      const auto left = std::chrono::duration_cast<Millis>(deadline - std::chrono::steady_clock::now());
      if (left <= Millis{0}) {
        break;
      }
      engine_.wait_for_change(wid, seen, std::min(left, Millis{250}));
      engine_.sweep_expired();
      view = engine_.window_view(wid);
    }
  }
  const auto filter = window_filter(req, id, false);
  const auto stats = engine_.tabulate(filter);
  const auto width = query_int(req, "width", options_.default_bar_width);
  return json_response(200, {{"version", view.version},
                             {"final", view.window.state == WindowState::Closed},
                             {"stats", stats},
                             {"bars", bar_layout(stats, width)}});
}

ApiResponse Api::stats_csv(const ApiRequest& req, const std::string& id) {
  require_teacher(req);
  engine_.sweep_expired();
  const auto stats = engine_.tabulate(window_filter(req, id, false));
  return ApiResponse{200, "text/csv; charset=utf-8", export_csv(stats)};
}

ApiResponse Api::compare(const ApiRequest& req) {
  require_teacher(req);
  const auto left = query(req, "left");
  const auto right = query(req, "right");
  if (!left || !right) {
    throw Error(ErrorCode::EmptyFilter, "left and right filters are required");
  }
  engine_.sweep_expired();
  return json_response(200, engine_.compare(parse_filter(*left), parse_filter(*right)));
}

ApiResponse Api::publish(const ApiRequest& req, const std::string& id) {
  require_teacher(req);
  const auto body = parse_body(req);
  const bool published = body.value("published", true);
  engine_.set_published(WindowId(id), published);
  return json_response(200, {{"window_id", id}, {"published", published}});
}

ApiResponse Api::static_page(const std::string& file) {
  const auto path = options_.web_root / file;
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return ApiResponse{200, "text/html; charset=utf-8", std::string(kPlaceholderPage)};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ApiResponse{200, "text/html; charset=utf-8", ss.str()};
}

} // namespace ars::http
