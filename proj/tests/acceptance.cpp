// Acceptance gate. One line per criterion; exit status is non-zero if any fails.

#include "ars/persistence.hpp"
#include "ars/sim/audience_sim.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <unistd.h>

using namespace ars;
using namespace ars::testing;
using namespace std::chrono_literals;
using nlohmann::json;
using Steady = std::chrono::steady_clock;

namespace {

struct Result {
  bool pass = false;
  std::string detail;
};

double seconds_since(Steady::time_point t0) {
  return std::chrono::duration<double>(Steady::now() - t0).count();
}

std::string fmt(double v, int digits = 2) {
  std::ostringstream ss;
  ss.setf(std::ios::fixed);
  ss.precision(digits);
  ss << v;
  return ss.str();
}

Result simulator_seeds() {
  std::vector<std::uint64_t> seeds{42};
  for (std::uint64_t s = 1; seeds.size() < 20; ++s) seeds.push_back(s);
  const auto t0 = Steady::now();
  int equal = 0;
  std::string first_bad;
  for (const auto seed : seeds) {
    sim::SimConfig c;
    c.participants = 1000;
    c.resubmit_probability = 0.2;
    c.late_fraction = 0.1;
    c.seed = seed;
    const auto r = sim::run_sim(c);
    if (r.equal) {
      ++equal;
    } else if (first_bad.empty()) {
      first_bad = "seed " + std::to_string(seed) + ": " + r.mismatch;
    }
  }
  const auto elapsed = seconds_since(t0);
  return {equal == 20 && elapsed < 60.0,
          std::to_string(equal) + "/20 seeds equal in " + fmt(elapsed) + " s (limit 60 s)" +
              (first_bad.empty() ? "" : "; " + first_bad)};
}

Result burst_conservation() {
  int ok = 0;
  std::string first_bad;
  for (int rep = 0; rep < 10; ++rep) {
    sim::SimConfig c;
    c.participants = 200;
    c.concurrency = 200;
    c.arrival = sim::Arrival::BurstAtDeadline;
    c.resubmit_probability = 0.2;
    c.late_fraction = 0.1;
    c.seed = 1000 + static_cast<std::uint64_t>(rep);
    const auto r = sim::run_sim(c);
    const bool conserved = r.equal && r.accepted + r.rejected_late + r.rejected_other == r.sent;
    if (conserved) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = "rep " + std::to_string(rep) + ": " + r.mismatch;
    }
  }
  return {ok == 10, std::to_string(ok) + "/10 runs conserved" + (first_bad.empty() ? "" : "; " + first_bad)};
}

Result deadline_fuzz() {
  std::mt19937_64 rng(2024);
  std::int64_t late_total = 0;
  std::int64_t late_rejected = 0;
  std::int64_t on_time_total = 0;
  std::int64_t on_time_accepted = 0;
  bool leaked = false;
  for (int trial = 0; trial < 200; ++trial) {
    Harness h;
    const auto q = h.single({"A", "B", "C"});
    const auto w = h.open(h.group({q}), std::chrono::seconds{std::uniform_int_distribution<int>(1, 5)(rng)});
    const auto deadline = *w.deadline();
    std::vector<std::pair<std::int64_t, int>> offsets;
    for (int p = 0; p < 50; ++p) {
      offsets.emplace_back(std::uniform_int_distribution<std::int64_t>(-50, 50)(rng), p);
    }
    std::sort(offsets.begin(), offsets.end());
    std::set<std::string> late_participants;
    for (const auto& [off, p] : offsets) {
      h.clock.set(deadline + Millis{off});
      const auto participant = "p" + std::to_string(p);
      const auto r = h.vote(w, q, participant, {p % 3});
      if (off > 0) {
        ++late_total;
        late_participants.insert(participant);
        if (!r.accepted && r.rejection == ErrorCode::WindowClosed) ++late_rejected;
      } else {
        ++on_time_total;
        if (r.accepted) ++on_time_accepted;
      }
    }
    const auto oracle = recount(h.log.events(), window_only(w.window_id.str(), true));
    StatsFilter f;
    f.window_id = w.window_id;
    const auto stats = h.engine.tabulate(f);
    const auto expected = static_cast<std::int64_t>(offsets.size() - late_participants.size());
    if (stats.questions[0].respondent_count != expected) leaked = true;
    for (const auto& e : h.log.events()) {
      if (e.kind == EventKind::ResponseRecorded &&
          late_participants.contains(e.payload["participant"].get<std::string>())) {
        leaked = true;
      }
    }
    if (!oracle.empty() && oracle.begin()->second.respondents != expected) leaked = true;
  }
  return {late_rejected == late_total && on_time_accepted == on_time_total && !leaked,
          std::to_string(late_rejected) + "/" + std::to_string(late_total) +
              " post-deadline rejected, " + std::to_string(on_time_accepted) + "/" +
              std::to_string(on_time_total) + " on-time accepted, " +
              (leaked ? "late responses leaked into tabulation" : "none tabulated")};
}

std::string csv_of(const EngineState& state) {
  std::string out;
  for (const auto& [id, rec] : state.sessions.all()) {
    StatsFilter f;
    f.window_id = id;
    out += export_csv(tabulate(state, f));
  }
  return out;
}

Result replay_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / ("ars-accept-" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(77);
  int identical = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto path = dir / "events.log";
    std::filesystem::remove(path);
    std::string live_csv;
    {
      FileEventLog log(path, Durability::Flush);
      Harness h;
      random_session(h, 5000 + static_cast<std::uint64_t>(trial));
      for (const auto& e : h.log.events()) log.append(e.kind, e.payload, e.recorded_at);
      live_csv = csv_of(h.engine.state_copy());
    }
    const auto read = read_log_file(path);
    const auto replayed = replay(read.events);
    const auto k = std::uniform_int_distribution<std::size_t>(0, read.events.size())(rng);
    const auto blob = snapshot(replay(std::span(read.events).first(k)));
    write_file_atomic(dir / "snapshot", blob);
    const auto loaded = load(read_file(dir / "snapshot"), std::span(read.events).subspan(k));
    if (csv_of(replayed) == live_csv && csv_of(loaded) == live_csv && !live_csv.empty()) ++identical;
  }
  std::filesystem::remove_all(dir);
  return {identical == 100, std::to_string(identical) + "/100 trials byte-identical"};
}

Result reuse_isolation() {
  int ok = 0;
  std::string first_bad;
  for (int trial = 0; trial < 200; ++trial) {
    std::mt19937_64 rng(900 + static_cast<std::uint64_t>(trial));
    const auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    Harness h;
    const auto a = h.single({"A", "B", "C"});
    const auto b = h.multiple({"X", "Y"});
    const auto g = h.group({a, b});
    std::vector<AnsweringWindow> windows;
    bool good = true;
    const int nw = pick(2, 5);
    for (int w = 0; w < nw; ++w) {
      windows.push_back(h.open(g));
      std::set<std::string> seen;
      for (int i = pick(0, 60); i > 0; --i) {
        h.clock.advance(Millis{pick(0, 5)});
        const auto participant = "p" + std::to_string(pick(0, 9));
        const bool use_a = pick(0, 1) == 0;
        const auto r = use_a ? h.vote(windows.back(), a, participant, {pick(0, 2)})
                             : h.vote(windows.back(), b, participant, {pick(0, 1)});
        // A participant's first answer in a window never replaces one from another window.
        const auto key = participant + (use_a ? "a" : "b");
        if (r.replaced_prior != seen.contains(key)) good = false;
        seen.insert(key);
      }
      h.engine.close_window(windows.back().window_id);
    }
    const auto events = h.log.events();
    std::int64_t group_total = 0;
    for (const auto& w : windows) {
      StatsFilter f;
      f.window_id = w.window_id;
      const auto stats = h.engine.tabulate(f);
      const auto oracle = recount(events, window_only(w.window_id.str()));
      for (const auto& q : stats.questions) {
        const auto it = oracle.find(q.question_id.str());
        const std::int64_t expected = it == oracle.end() ? 0 : it->second.respondents;
        if (q.respondent_count != expected) good = false;
        group_total += q.respondent_count;
        for (const auto& o : q.options) {
          const std::int64_t c = it == oracle.end() || !it->second.counts.contains(o.option_id.str())
                                     ? 0
                                     : it->second.counts.at(o.option_id.str());
          if (o.count != c) good = false;
        }
      }
    }
    StatsFilter gf;
    gf.group_id = g;
    std::int64_t grouped = 0;
    for (const auto& q : h.engine.tabulate(gf).questions) grouped += q.respondent_count;
    if (grouped != group_total) good = false;
    if (good) {
      ++ok;
    } else if (first_bad.empty()) {
      first_bad = "trial " + std::to_string(trial);
    }
  }
  return {ok == 200, std::to_string(ok) + "/200 interleavings isolated" + (first_bad.empty() ? "" : "; first failure " + first_bad)};
}

Result auth_matrix() {
  ServiceHarness s;
  const auto teacher = s.login();
  const auto expired = s.login();
  const auto make = [&](const std::string& visibility) {
    const auto q = json::parse(s.call("POST", "/api/questions",
                                      {{"text", "Q"}, {"kind", "single"}, {"options", {"a", "b"}}}, teacher).body);
    const auto g = json::parse(s.call("POST", "/api/groups",
                                      {{"title", "g"}, {"question_ids", {q["question_id"]}}, {"visibility", visibility}},
                                      teacher).body);
    return std::pair{q, g["group_id"].get<std::string>()};
  };
  auto [q, gid] = make("protected");
  const auto window = json::parse(s.call("POST", "/api/groups/" + gid + "/windows", json::object(), teacher).body);
  const std::string wid = window["window_id"];
  const std::string code = window["join_code"];
  const auto participant = json::parse(s.call("POST", "/api/windows/" + wid + "/token", {{"join_code", code}}).body)["token"]
                               .get<std::string>();
  auto [pq, pgid] = make("public");
  const auto pwindow = json::parse(s.call("POST", "/api/groups/" + pgid + "/windows", json::object(), teacher).body);
  const std::string pwid = pwindow["window_id"];
  auto [cq, cgid] = make("public");
  const std::string cwid =
      json::parse(s.call("POST", "/api/groups/" + cgid + "/windows", json::object(), teacher).body)["window_id"];

  // Expire one teacher session: advance past its ttl, then log in afresh.
  s.clock.advance(31min);
  const auto fresh = s.login();

  struct Endpoint {
    std::string method;
    std::string path;
    json body;
  };
  const std::vector<Endpoint> teacher_only = {
      {"POST", "/api/questions", {{"text", "Q2"}, {"kind", "single"}, {"options", {"a", "b"}}}},
      {"GET", "/api/questions", nullptr},
      {"PATCH", "/api/questions/" + q["question_id"].get<std::string>(), {{"text", "Q3"}}},
      {"POST", "/api/groups", {{"title", "h"}, {"question_ids", {q["question_id"]}}}},
      {"POST", "/api/groups/" + gid + "/state", {{"state", "unlocked"}}},
      {"POST", "/api/groups/" + gid + "/windows", json::object()},
      {"GET", "/api/windows/" + wid + "/stats", nullptr},
      {"GET", "/api/windows/" + wid + "/stats.csv", nullptr},
      {"GET", "/api/windows/" + wid + "/stats/stream", nullptr},
      {"GET", "/api/stats/compare?", nullptr},
      {"POST", "/api/windows/" + wid + "/publish", {{"published", false}}},
      {"POST", "/api/windows/" + cwid + "/close", json::object()},
  };
  struct Role {
    std::string name;
    std::string bearer;
    int expected;
  };
  const std::vector<Role> roles = {
      {"none", "", 401}, {"participant", participant, 403}, {"expired", expired, 401}, {"teacher", fresh, 0}};

  int checked = 0;
  std::vector<std::string> failures;
  for (const auto& ep : teacher_only) {
    for (const auto& role : roles) {
      std::map<std::string, std::string> query;
      auto path = ep.path;
      if (path.ends_with("?")) {
        path.pop_back();
        query = {{"left", "window=" + wid}, {"right", "window=" + wid}};
      }
      const auto res = s.call(ep.method, path, ep.body, role.bearer, query);
      ++checked;
      const bool ok = role.expected == 0 ? (res.status == 409 || (res.status >= 200 && res.status < 300))
                                         : res.status == role.expected;
      if (!ok) failures.push_back(ep.method + " " + path + " as " + role.name + " -> " + std::to_string(res.status));
    }
  }

  // Public and participant endpoints.
  const auto expect = [&](const std::string& what, int got, int want) {
    ++checked;
    if (got != want) failures.push_back(what + " -> " + std::to_string(got) + " (want " + std::to_string(want) + ")");
  };
  expect("status as none", s.call("GET", "/api/windows/" + wid + "/status").status, 200);
  expect("status as participant", s.call("GET", "/api/windows/" + wid + "/status", nullptr, participant).status, 200);
  expect("page / as none", s.call("GET", "/").status, 200);
  expect("page /teach as none", s.call("GET", "/teach").status, 200);
  expect("token protected without code", s.call("POST", "/api/windows/" + wid + "/token", json::object()).status, 403);
  expect("token protected with teacher but no code",
         s.call("POST", "/api/windows/" + wid + "/token", json::object(), fresh).status, 403);
  expect("token public without credential", s.call("POST", "/api/windows/" + pwid + "/token", json::object()).status, 201);
  const json vote{{"question_id", q["question_id"]}, {"options", {q["options"][0]["id"]}}};
  expect("submit as none", s.call("POST", "/api/windows/" + wid + "/submit", vote).status, 401);
  expect("submit as teacher bearer", s.call("POST", "/api/windows/" + wid + "/submit", vote, fresh).status, 401);
  expect("submit with participant token", s.submit(wid, participant, vote).status, 200);
  expect("submit with another window's token", s.submit(pwid, participant, vote).status, 403);

  std::string detail = std::to_string(checked - static_cast<int>(failures.size())) + "/" + std::to_string(checked) +
                       " (endpoint, role) pairs as expected";
  if (!failures.empty()) detail += "; first: " + failures.front();
  return {failures.empty(), detail};
}

Result scaling() {
  const auto run = [](int participants) {
    std::vector<double> times;
    for (int i = 0; i < 5; ++i) {
      sim::SimConfig c;
      c.participants = participants;
      c.resubmit_probability = 0.2;
      c.late_fraction = 0.1;
      c.seed = 500 + static_cast<std::uint64_t>(i);
      const auto t0 = Steady::now();
      sim::run_sim(c);
      times.push_back(seconds_since(t0));
    }
    std::sort(times.begin(), times.end());
    return times[2];
  };
  run(200);  // warm-up
  const auto t1000 = run(1000);
  const auto t2000 = run(2000);
  const auto ratio = t2000 / t1000;
  return {ratio <= 2.5, "median " + fmt(t1000, 3) + " s at 1000, " + fmt(t2000, 3) + " s at 2000, ratio " +
                            fmt(ratio) + " (limit 2.50)"};
}

Result fraction_sums() {
  int single_checked = 0;
  int multi_checked = 0;
  std::string first_bad;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    Harness h;
    RandomSessionSpec spec;
    spec.max_questions = 2;
    spec.max_windows = 1;
    spec.max_participants = 12;
    spec.max_actions = 25;
    spec.multiple_choice = seed % 2 == 1;
    random_session(h, 70000 + seed, spec);
    const auto state = h.engine.state_copy();
    for (const auto& [id, rec] : state.sessions.all()) {
      StatsFilter f;
      f.window_id = id;
      for (const auto& q : h.engine.tabulate(f).questions) {
        std::int64_t total = 0;
        Fraction sum(0);
        bool bounded = true;
        for (const auto& o : q.options) {
          total += o.count;
          sum += o.fraction;
          bounded = bounded && o.fraction >= Fraction(0) && o.fraction <= Fraction(1);
        }
        bool ok = bounded;
        if (q.kind == ChoiceKind::SingleChoice) {
          ++single_checked;
          ok = ok && total == q.respondent_count && (q.respondent_count == 0 ? sum == Fraction(0) : sum == Fraction(1));
        } else {
          ++multi_checked;
          ok = ok && total >= q.respondent_count;
        }
        if (!ok && first_bad.empty()) first_bad = "seed " + std::to_string(seed);
      }
    }
  }
  return {first_bad.empty(), std::to_string(single_checked) + " single-choice and " +
                                 std::to_string(multi_checked) + " multiple-choice tabulations over 10000 logs" +
                                 (first_bad.empty() ? "" : "; first failure " + first_bad)};
}

} // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"simulator matches server over 20 seeds (1000 participants, loopback)", simulator_seeds},
      {"200 concurrent clients bursting at the deadline conserve responses, 10 runs", burst_conservation},
      {"deadline fuzz +-50 ms: late submissions rejected and never tabulated", deadline_fuzz},
      {"replay and snapshot+tail reproduce byte-identical CSV, 100 trials", replay_determinism},
      {"answering windows of one group stay isolated under random interleavings", reuse_isolation},
      {"authorization matrix over every endpoint and role", auth_matrix},
      {"time(2000 participants) <= 2.5 x time(1000), median of 5", scaling},
      {"counts sum to respondents and fractions to exactly 1 over 10^4 random logs", fraction_sums},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Result r;
    try {
      r = run();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += r.pass ? 0 : 1;
    std::cout << (r.pass ? "PASS" : "FAIL") << " [" << n << "] " << name << ": " << r.detail << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size()
            << " acceptance criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
