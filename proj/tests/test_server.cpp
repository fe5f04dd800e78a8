#include "doctest.h"

#include "ars/http/server.hpp"
#include "ars/sim/audience_sim.hpp"
#include "ars/sim/transport.hpp"
#include "support/fixtures.hpp"

#include "httplib.h"

#include <thread>

using namespace ars;
using namespace ars::testing;
using namespace std::chrono_literals;
using nlohmann::json;

namespace {

/// Real sockets on an ephemeral port, system clock.
struct LiveServer {
  SystemClock clock;
  UlidSource ids{clock};
  MemoryEventLog log;
  Engine engine{EngineState{}, log, clock, ids};
  http::TeacherAuth auth{http::hash_password("pw", http::HashStrength::Minimal), std::chrono::minutes{30}, clock};
  http::ParticipantRegistry participants{clock, 256};
  http::Api api{engine, auth, participants, [] {
                  http::ApiOptions o;
                  o.refresh_interval = Millis{20};
                  return o;
                }()};
  http::HttpServer server{api};
  int port = server.bind("127.0.0.1", 0);
  std::thread thread{[this] { server.listen(); }};

  ~LiveServer() {
    server.stop();
    thread.join();
  }

  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

} // namespace

TEST_CASE("requests round-trip over real sockets") {
  LiveServer srv;
  sim::HttpTransport transport(srv.url());
  http::ApiRequest login{"POST", "/api/auth/login", {}, {}, json{{"password", "pw"}}.dump()};
  const auto res = transport.call(login);
  CHECK(res.status == 200);
  CHECK(res.content_type.find("application/json") != std::string::npos);

  http::ApiRequest missing{"GET", "/api/windows/none/status", {}, {}, ""};
  CHECK(transport.call(missing).status == 404);
}

TEST_CASE("the stats stream delivers frames until the window closes") {
  LiveServer srv;
  const auto q = srv.engine.make_question("Q", ChoiceKind::SingleChoice, {"a", "b"});
  const auto g = srv.engine.compose_group("g", {q.question_id}, Visibility::Public);
  const auto w = srv.engine.open_window(g.group_id, std::nullopt);
  const auto teacher = srv.auth.login("pw").token;

  std::string received;
  std::thread client([&] {
    httplib::Client c(srv.url());
    c.set_read_timeout(10);
    c.Get("/api/windows/" + w.window_id.str() + "/stats/stream",
          httplib::Headers{{"Authorization", "Bearer " + teacher}},
          [&](const char* data, std::size_t n) {
            received.append(data, n);
            return true;
          });
  });
  std::this_thread::sleep_for(100ms);
  Submission sub{"p1", w.window_id, q.question_id, {q.options[1].id}, std::nullopt, std::nullopt};
  CHECK(srv.engine.submit(sub).accepted);
  std::this_thread::sleep_for(100ms);
  srv.engine.close_window(w.window_id);
  client.join();

  CHECK(received.rfind("event: stats\ndata: ", 0) == 0);
  const auto last = received.rfind("data: ");
  REQUIRE(last != std::string::npos);
  const auto frame = json::parse(received.substr(last + 6));
  CHECK(frame["final"] == true);
  CHECK(frame["stats"]["questions"][0]["options"][1]["count"] == 1);
}

TEST_CASE("stream without a teacher session is refused") {
  LiveServer srv;
  httplib::Client c(srv.url());
  const auto res = c.Get("/api/windows/whatever/stats/stream");
  REQUIRE(res);
  CHECK(res->status == 401);
}

TEST_CASE("an unreachable target is reported") {
  sim::HttpTransport transport("http://127.0.0.1:1");
  try {
    transport.call({"GET", "/", {}, {}, ""});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TargetUnreachable);
  }
}

TEST_CASE("the simulator checks a real server") {
  LiveServer srv;
  sim::SimConfig config;
  config.participants = 40;
  config.target = srv.url();
  config.teacher_password = "pw";
  config.duration = 2s;
  config.late_fraction = 0.1;
  config.resubmit_probability = 0.3;
  config.seed = 3;
  config.concurrency = 8;
  const auto report = sim::run_sim(config);
  CHECK_MESSAGE(report.equal, report.mismatch);
  CHECK(report.rejected_late == report.expected_rejected_late);

  config.teacher_password = "wrong";
  try {
    sim::run_sim(config);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AuthFailed);
  }
}
