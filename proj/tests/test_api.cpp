#include "doctest.h"

#include "ars/http/live_stream.hpp"
#include "support/fixtures.hpp"

#include <thread>

using namespace ars;
using namespace ars::testing;
using namespace std::chrono_literals;
using nlohmann::json;

namespace {

struct Session {
  ServiceHarness s;
  std::string teacher = s.login();
  json question;
  std::string window_id;
  std::string join_code;

  explicit Session(const std::string& visibility = "protected", json duration = nullptr) {
    question = json::parse(s.call("POST", "/api/questions",
                                  {{"text", "Best colour?"}, {"kind", "single"}, {"options", {"red", "blue"}}},
                                  teacher).body);
    const auto group = json::parse(s.call("POST", "/api/groups",
                                          {{"title", "g"},
                                           {"question_ids", {question["question_id"]}},
                                           {"visibility", visibility}},
                                          teacher).body);
    const auto window = json::parse(
        s.call("POST", "/api/groups/" + group["group_id"].get<std::string>() + "/windows",
               {{"duration_s", duration}}, teacher)
            .body);
    window_id = window["window_id"];
    if (!window["join_code"].is_null()) join_code = window["join_code"];
  }

  std::string token() {
    const auto res = s.call("POST", "/api/windows/" + window_id + "/token", {{"join_code", join_code}});
    REQUIRE(res.status == 201);
    return json::parse(res.body)["token"];
  }

  json vote_body(int option) const {
    return {{"question_id", question["question_id"]}, {"options", {question["options"][option]["id"]}}};
  }
};

} // namespace

TEST_CASE("login") {
  ServiceHarness s;
  CHECK(s.call("POST", "/api/auth/login", {{"password", "nope"}}).status == 401);
  const auto res = s.call("POST", "/api/auth/login", {{"password", ServiceHarness::kPassword}});
  CHECK(res.status == 200);
  CHECK(json::parse(res.body)["token"].get<std::string>().size() == 22);
  CHECK(s.call("POST", "/api/auth/login", "not json").status == 422);
}

TEST_CASE("teacher endpoints need a live session") {
  ServiceHarness s;
  const json body{{"text", "Q"}, {"kind", "single"}, {"options", {"a", "b"}}};
  CHECK(s.call("POST", "/api/questions", body).status == 401);
  const auto token = s.login();
  CHECK(s.call("POST", "/api/questions", body, token).status == 201);
  s.clock.advance(31min);
  const auto expired = s.call("POST", "/api/questions", body, token);
  CHECK(expired.status == 401);
  CHECK(json::parse(expired.body)["error"] == "AuthRequired");
}

TEST_CASE("validation failures name the violation") {
  ServiceHarness s;
  const auto token = s.login();
  const auto res = s.call("POST", "/api/questions", {{"text", ""}, {"kind", "single"}, {"options", {"a"}}}, token);
  CHECK(res.status == 422);
  CHECK(json::parse(res.body)["error"] == "EmptyText");
}

TEST_CASE("protected windows need the join code") {
  Session t;
  REQUIRE(t.join_code.size() == 6);
  const auto path = "/api/windows/" + t.window_id + "/token";
  CHECK(t.s.call("POST", path, json::object()).status == 403);
  CHECK(t.s.call("POST", path, {{"join_code", "ZZZZZZ"}}).status == 403);
  CHECK(t.s.call("POST", path, {{"join_code", t.join_code}}).status == 201);

  const auto status = json::parse(t.s.call("GET", "/api/windows/" + t.window_id + "/status").body);
  CHECK_FALSE(status["window"].contains("join_code"));
  const auto teacher_view =
      json::parse(t.s.call("GET", "/api/windows/" + t.window_id + "/status", nullptr, t.teacher).body);
  CHECK(teacher_view["window"]["join_code"] == t.join_code);
}

TEST_CASE("public windows issue tokens without credentials") {
  Session t("public");
  CHECK(t.join_code.empty());
  CHECK(t.s.call("POST", "/api/windows/" + t.window_id + "/token", json::object()).status == 201);
}

TEST_CASE("submission flow, replacement and idempotent retry") {
  Session t;
  const auto token = t.token();
  auto body = t.vote_body(0);
  body["idempotency_key"] = "k";
  const auto first = t.s.submit(t.window_id, token, body);
  CHECK(first.status == 200);
  const auto retry = t.s.submit(t.window_id, token, body);
  CHECK(retry.body == first.body);
  const auto second = json::parse(t.s.submit(t.window_id, token, t.vote_body(1)).body);
  CHECK(second["replaced_prior"] == true);

  CHECK(t.s.submit(t.window_id, "bogus", t.vote_body(0)).status == 401);
  auto bad = t.vote_body(0);
  bad["options"] = json::array();
  const auto rejected = t.s.submit(t.window_id, token, bad);
  CHECK(rejected.status == 422);
  CHECK(json::parse(rejected.body)["receipt"]["accepted"] == false);

  t.s.call("POST", "/api/windows/" + t.window_id + "/close", nullptr, t.teacher);
  const auto late = t.s.submit(t.window_id, token, t.vote_body(0));
  CHECK(late.status == 409);
  CHECK(json::parse(late.body)["error"] == "WindowClosed");

  const auto csv = t.s.call("GET", "/api/windows/" + t.window_id + "/stats.csv", nullptr, t.teacher);
  CHECK(csv.status == 200);
  CHECK(csv.content_type.rfind("text/csv", 0) == 0);
  CHECK(csv.body.find(",blue,1,1,1.000000\r\n") != std::string::npos);
}

TEST_CASE("a participant token is not a teacher credential") {
  Session t;
  const auto token = t.token();
  const auto res = t.s.call("GET", "/api/windows/" + t.window_id + "/stats", nullptr, token);
  CHECK(res.status == 403);
  CHECK(json::parse(res.body)["error"] == "Forbidden");
}

TEST_CASE("a token only works in its own window") {
  Session t;
  const auto token = t.token();
  t.s.call("POST", "/api/windows/" + t.window_id + "/close", nullptr, t.teacher);
  const auto group_id = json::parse(t.s.call("GET", "/api/windows/" + t.window_id + "/status").body)["group"]["group_id"]
                            .get<std::string>();
  const auto w2 = json::parse(t.s.call("POST", "/api/groups/" + group_id + "/windows", json::object(), t.teacher).body);
  CHECK(t.s.submit(w2["window_id"], token, t.vote_body(0)).status == 403);
}

TEST_CASE("status reports the countdown and published results") {
  Session t("protected", 60);
  t.s.clock.advance(15s);
  auto status = json::parse(t.s.call("GET", "/api/windows/" + t.window_id + "/status").body);
  CHECK(status["state"] == "open");
  CHECK(status["remaining_ms"] == 45000);
  CHECK_FALSE(status.contains("results"));
  CHECK(status["group"]["questions"].size() == 1);

  t.s.submit(t.window_id, t.token(), t.vote_body(1));
  CHECK(t.s.call("POST", "/api/windows/" + t.window_id + "/publish", {{"published", true}}, t.teacher).status == 200);
  status = json::parse(t.s.call("GET", "/api/windows/" + t.window_id + "/status").body);
  CHECK(status["results"]["stats"]["questions"][0]["respondent_count"] == 1);

  t.s.clock.advance(60s);
  status = json::parse(t.s.call("GET", "/api/windows/" + t.window_id + "/status").body);
  CHECK(status["state"] == "closed");
  CHECK(status["remaining_ms"].is_null());
}

TEST_CASE("long-poll returns once the version moves") {
  Session t;
  const auto stats_path = "/api/windows/" + t.window_id + "/stats";
  const auto v0 = json::parse(t.s.call("GET", stats_path, nullptr, t.teacher, {{"live", "1"}}).body)["version"]
                      .get<std::uint64_t>();
  const auto token = t.token();
  std::thread voter([&] {
    std::this_thread::sleep_for(30ms);
    t.s.submit(t.window_id, token, t.vote_body(0));
  });
  const auto res = json::parse(
      t.s.call("GET", stats_path, nullptr, t.teacher,
               {{"live", "1"}, {"after", std::to_string(v0)}, {"wait_ms", "5000"}})
          .body);
  voter.join();
  CHECK(res["version"].get<std::uint64_t>() > v0);
  CHECK(res["final"] == false);
  CHECK(res["stats"]["questions"][0]["respondent_count"] == 1);
}

TEST_CASE("live stream ends with the closed tabulation") {
  Session t;
  const WindowId wid(t.window_id);
  http::LiveStatsStream stream(t.s.engine, wid, 1ms, 20ms);
  const auto first = stream.next();
  REQUIRE(first);
  CHECK_FALSE(first->final);

  const auto token = t.token();
  t.s.submit(t.window_id, token, t.vote_body(0));
  t.s.clock.advance(1s);
  t.s.call("POST", "/api/windows/" + t.window_id + "/close", nullptr, t.teacher);

  std::optional<http::StreamFrame> last;
  while (auto frame = stream.next()) last = frame;
  REQUIRE(last);
  CHECK(last->final);
  StatsFilter f;
  f.window_id = wid;
  CHECK(export_csv(last->stats) == export_csv(t.s.engine.tabulate(f)));
  CHECK(last->to_sse(10).rfind("event: stats\ndata: ", 0) == 0);
}

TEST_CASE("unknown routes and ids") {
  Session t;
  CHECK(t.s.call("GET", "/api/nothing").status == 404);
  CHECK(t.s.call("GET", "/api/windows/ghost/status").status == 404);
  CHECK(t.s.call("GET", "/").status == 200);
}

TEST_CASE("comparison endpoint") {
  Session t;
  t.s.call("POST", "/api/windows/" + t.window_id + "/close", nullptr, t.teacher);
  const auto filter = "window=" + t.window_id;
  const auto res = t.s.call("GET", "/api/stats/compare", nullptr, t.teacher, {{"left", filter}, {"right", filter}});
  CHECK(res.status == 200);
  CHECK(json::parse(res.body)["rows"].size() == 2);
  CHECK(t.s.call("GET", "/api/stats/compare", nullptr, t.teacher).status == 422);
}
