#include "ars/sim/audience_sim.hpp"

#include "ars/engine.hpp"
#include "ars/http/api.hpp"
#include "ars/http/auth.hpp"
#include "ars/sim/transport.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>
#include <unistd.h>

namespace ars::sim {

using nlohmann::json;

Arrival parse_arrival(std::string_view text) {
  if (text == "uniform") return Arrival::UniformOverWindow;
  if (text == "burst-open") return Arrival::BurstAtOpen;
  if (text == "burst-deadline") return Arrival::BurstAtDeadline;
  throw Error(ErrorCode::BadRequest, "unknown arrival pattern: " + std::string(text));
}

std::string_view to_string(Arrival arrival) noexcept {
  switch (arrival) {
  case Arrival::UniformOverWindow: return "uniform";
  case Arrival::BurstAtOpen: return "burst-open";
  case Arrival::BurstAtDeadline: return "burst-deadline";
  }
  return "uniform";
}

std::vector<QuestionPlan> default_questions() {
  return {
      {"Which option is correct?", ChoiceKind::SingleChoice, {"A", "B", "C", "D"},
       {Fraction(1, 2), Fraction(1, 4), Fraction(1, 8), Fraction(1, 8)}, 1},
      {"Select all that apply", ChoiceKind::MultipleChoice, {"X", "Y", "Z"},
       {Fraction(1, 2), Fraction(1, 3), Fraction(1, 6)}, 2},
  };
}

std::vector<QuestionPlan> questions_from_json(const json& j) {
  std::vector<QuestionPlan> out;
  for (const auto& q : j) {
    QuestionPlan plan;
    plan.text = q.at("text").get<std::string>();
    plan.kind = parse_choice_kind(q.value("kind", std::string("single")));
    plan.labels = q.at("options").get<std::vector<std::string>>();
    for (const auto& p : q.at("probabilities")) {
      plan.probabilities.push_back(p.is_string() ? parse_fraction(p.get<std::string>())
                                                 : Fraction(p.get<std::int64_t>()));
    }
    plan.max_picks = q.value("max_picks", plan.kind == ChoiceKind::SingleChoice ? 1 : 2);
    out.push_back(std::move(plan));
  }
  return out;
}

void validate(const SimConfig& config) {
  const auto fail = [](const std::string& what) { throw Error(ErrorCode::BadRequest, what); };
  if (config.participants < 1) fail("participants must be >= 1");
  if (config.questions.empty()) fail("at least one question is required");
  if (config.resubmit_probability < 0 || config.resubmit_probability > 1)
    fail("resubmit probability must be in [0,1]");
  if (config.late_fraction < 0 || config.late_fraction > 1) fail("late fraction must be in [0,1]");
  if (config.duration.count() < 1) fail("duration must be >= 1 s");
  if (config.concurrency < 1) fail("concurrency must be >= 1");
  for (std::size_t i = 0; i < config.questions.size(); ++i) {
    const auto& q = config.questions[i];
    const auto where = "question " + std::to_string(i) + ": ";
    if (q.labels.size() < 2) fail(where + "needs at least two options");
    if (q.probabilities.size() != q.labels.size()) fail(where + "one probability per option");
    Fraction sum(0);
    for (const auto& p : q.probabilities) {
      if (p < Fraction(0)) fail(where + "negative probability");
      sum += p;
    }
    if (sum != Fraction(1)) fail(where + "probabilities sum to " + ars::to_string(sum) + ", not 1");
    if (q.kind == ChoiceKind::MultipleChoice && q.max_picks < 1) fail(where + "max_picks must be >= 1");
  }
}

// ------------------------------------------------------------------ planning

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % n;
  }
  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }
  bool chance(double p) {
    if (p <= 0) return false;
    if (p >= 1) return true;
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
  }

private:
  std::mt19937_64 engine_;
};

/// Draws an option index with exact rational weights, skipping `excluded`.
std::optional<int> draw(Rng& rng, const std::vector<Fraction>& probs, const std::vector<bool>& excluded) {
  std::int64_t common = 1;
  for (const auto& p : probs) {
    common = std::lcm(common, p.denominator());
  }
  std::vector<std::int64_t> weights(probs.size(), 0);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!excluded[i]) {
      weights[i] = probs[i].numerator() * (common / probs[i].denominator());
      total += weights[i];
    }
  }
  if (total == 0) {
    return std::nullopt;
  }
  auto u = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) {
      return static_cast<int>(i);
    }
    u -= weights[i];
  }
  return std::nullopt;
}

std::vector<int> pick(Rng& rng, const QuestionPlan& q) {
  std::vector<bool> excluded(q.labels.size(), false);
  int picks = 1;
  if (q.kind == ChoiceKind::MultipleChoice) {
    picks = static_cast<int>(rng.between(1, std::min<std::int64_t>(q.max_picks, q.labels.size())));
  }
  std::vector<int> out;
  for (int i = 0; i < picks; ++i) {
    const auto idx = draw(rng, q.probabilities, excluded);
    if (!idx) {
      break;
    }
    excluded[static_cast<std::size_t>(*idx)] = true;
    out.push_back(*idx);
  }
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace

std::vector<PlannedSubmit> plan_submissions(const SimConfig& config, std::int64_t guard_ms) {
  const std::int64_t window_ms = config.duration.count() * 1000;
  const std::int64_t last_on_time = std::max<std::int64_t>(0, window_ms - guard_ms);
  const std::int64_t first_late = window_ms + 1 + guard_ms;
  constexpr std::int64_t kBurst = 10;
  constexpr std::int64_t kLateSpread = 1000;

  std::vector<PlannedSubmit> plan;
  for (int p = 0; p < config.participants; ++p) {
    Rng rng(splitmix64(config.seed ^ splitmix64(static_cast<std::uint64_t>(p) + 1)));
    const bool late = rng.chance(config.late_fraction);
    std::int64_t lo = 0;
    std::int64_t hi = last_on_time;
    if (late) {
      lo = first_late;
      hi = first_late + kLateSpread;
    } else if (config.arrival == Arrival::BurstAtOpen) {
      hi = std::min(last_on_time, kBurst);
    } else if (config.arrival == Arrival::BurstAtDeadline) {
      lo = std::max<std::int64_t>(0, last_on_time - kBurst);
    }
    std::vector<PlannedSubmit> mine;
    for (std::size_t q = 0; q < config.questions.size(); ++q) {
      PlannedSubmit first{p, static_cast<int>(q), pick(rng, config.questions[q]), rng.between(lo, hi), late, 0};
      const bool resubmit = rng.chance(config.resubmit_probability);
      mine.push_back(first);
      if (resubmit) {
        PlannedSubmit again{p, static_cast<int>(q), pick(rng, config.questions[q]),
                            rng.between(first.at_ms, hi), late, 0};
        mine.push_back(std::move(again));
      }
    }
    // Stable: a resubmit never precedes its own first submission.
    std::stable_sort(mine.begin(), mine.end(),
                     [](const PlannedSubmit& a, const PlannedSubmit& b) { return a.at_ms < b.at_ms; });
    for (std::size_t i = 0; i < mine.size(); ++i) {
      mine[i].seq = static_cast<int>(i);
      plan.push_back(std::move(mine[i]));
    }
  }
  std::stable_sort(plan.begin(), plan.end(), [](const PlannedSubmit& a, const PlannedSubmit& b) {
    return a.at_ms < b.at_ms;
  });
  return plan;
}

// ------------------------------------------------------------------- running

namespace {

/// Runs batches of tasks on a fixed set of threads; run() blocks until the
/// whole batch finished.
class TaskPool {
public:
  explicit TaskPool(int threads) {
    for (int i = 1; i < threads; ++i) {
      workers_.emplace_back([this] { work(); });
    }
  }

  ~TaskPool() {
    {
      std::lock_guard lock(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : workers_) {
      t.join();
    }
  }

  void run(std::vector<std::function<void()>>& tasks) {
    if (workers_.empty() || tasks.size() == 1) {
      for (auto& t : tasks) t();
      return;
    }
    {
      std::lock_guard lock(mu_);
      tasks_ = &tasks;
      next_ = 0;
      remaining_ = tasks.size();
      ++generation_;
    }
    cv_.notify_all();
    drain();
    std::unique_lock lock(mu_);
    done_cv_.wait(lock, [&] { return remaining_ == 0; });
    tasks_ = nullptr;
  }

private:
  void drain() {
    while (true) {
      std::function<void()>* task = nullptr;
      {
        std::lock_guard lock(mu_);
        if (tasks_ == nullptr || next_ >= tasks_->size()) {
          return;
        }
        task = &(*tasks_)[next_++];
      }
      (*task)();
      std::lock_guard lock(mu_);
      if (--remaining_ == 0) {
        done_cv_.notify_all();
      }
    }
  }

  void work() {
    std::uint64_t seen = 0;
    while (true) {
      {
        std::unique_lock lock(mu_);
        cv_.wait(lock, [&] { return stop_ || generation_ != seen; });
        if (stop_) {
          return;
        }
        seen = generation_;
      }
      drain();
    }
  }

  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  std::vector<std::thread> workers_;
  std::vector<std::function<void()>>* tasks_ = nullptr;
  std::size_t next_ = 0;
  std::size_t remaining_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

/// In-process server on a controllable clock.
struct LoopbackServer {
  explicit LoopbackServer(const SimConfig& config)
      : clock(parse_iso("2026-01-05T09:00:00.000Z")),
        ids("id"),
        password(http::random_token()),
        auth(http::hash_password(password, http::HashStrength::Minimal), std::chrono::minutes{600},
             clock),
        participants(clock, 1 << 20) {
    static std::atomic<int> counter{0};
    if (config.data_dir) {
      dir = *config.data_dir;
    } else {
      dir = std::filesystem::temp_directory_path() /
            ("arssim-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
      owns_dir = true;
    }
    std::filesystem::create_directories(dir);
    std::filesystem::remove(dir / "events.log");
    log = std::make_unique<FileEventLog>(dir / "events.log", Durability::Flush);
    engine = std::make_unique<Engine>(EngineState{}, *log, clock, ids);
    api = std::make_unique<http::Api>(*engine, auth, participants, http::ApiOptions{});
    transport = std::make_unique<LoopbackTransport>(*api);
  }

  ~LoopbackServer() {
    transport.reset();
    api.reset();
    engine.reset();
    log.reset();
    if (owns_dir) {
      std::error_code ec;
      std::filesystem::remove_all(dir, ec);
    }
  }

  ManualClock clock;
  SequentialIds ids;
  std::string password;
  http::TeacherAuth auth;
  http::ParticipantRegistry participants;
  std::filesystem::path dir;
  bool owns_dir = false;
  std::unique_ptr<FileEventLog> log;
  std::unique_ptr<Engine> engine;
  std::unique_ptr<http::Api> api;
  std::unique_ptr<LoopbackTransport> transport;
};

struct Client {
  Transport& transport;
  std::string teacher_token;

  http::ApiResponse send(const std::string& method, const std::string& path, const json& body,
                         std::map<std::string, std::string> headers = {},
                         std::map<std::string, std::string> query = {}) const {
    http::ApiRequest req;
    req.method = method;
    req.path = path;
    req.body = body.is_null() ? "" : body.dump();
    req.headers = std::move(headers);
    req.query = std::move(query);
    if (!teacher_token.empty() && !req.headers.contains("x-participant-token")) {
      req.headers["authorization"] = "Bearer " + teacher_token;
    }
    return transport.call(req);
  }

  json expect(const std::string& method, const std::string& path, const json& body, int status) const {
    const auto res = send(method, path, body);
    if (res.status != status) {
      throw Error(ErrorCode::BadRequest, method + " " + path + " returned " +
                                             std::to_string(res.status) + ": " + res.body);
    }
    return json::parse(res.body);
  }
};

struct Outcome {
  int status = 0;
  bool accepted = false;
  bool replaced = false;
  bool late_rejection = false;
  double latency_us = 0;
};

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\r') {
      // CRLF terminator
    } else if (c == '\n') {
      row.push_back(std::move(field));
      field.clear();
      rows.push_back(std::move(row));
      row.clear();
    } else {
      field += c;
    }
  }
  if (!field.empty() || !row.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

double percentile(std::vector<double> sorted, double q) {
  if (sorted.empty()) {
    return 0;
  }
  const auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(sorted.size())));
  return sorted[std::clamp<std::size_t>(rank, 1, sorted.size()) - 1];
}

std::string describe_counts(const std::vector<std::vector<std::int64_t>>& counts, std::size_t q) {
  std::string s = "(";
  for (std::size_t i = 0; i < counts[q].size(); ++i) {
    s += (i ? "," : "") + std::to_string(counts[q][i]);
  }
  return s + ")";
}

} // namespace

json SimReport::deterministic_json() const {
  return json{{"sent", sent},
              {"accepted", accepted},
              {"rejected_late", rejected_late},
              {"rejected_other", rejected_other},
              {"replaced", replaced},
              {"expected_accepted", expected_accepted},
              {"expected_rejected_late", expected_rejected_late},
              {"expected_replaced", expected_replaced},
              {"expected_counts", expected_counts},
              {"observed_counts", observed_counts},
              {"expected_respondents", expected_respondents},
              {"observed_respondents", observed_respondents},
              {"equal", equal},
              {"mismatch", mismatch}};
}

json SimReport::to_json() const {
  auto j = deterministic_json();
  j["wall_ms"] = wall_ms;
  j["latency_us"] = {{"p50", latency_p50_us}, {"p95", latency_p95_us}, {"p99", latency_p99_us}};
  return j;
}

SimReport run_sim(const SimConfig& config) {
  validate(config);
  const auto wall_start = std::chrono::steady_clock::now();
  const bool loopback = config.target == "loopback";

  std::unique_ptr<LoopbackServer> server;
  std::unique_ptr<HttpTransport> http_transport;
  Transport* transport = nullptr;
  std::string password = config.teacher_password;
  if (loopback) {
    server = std::make_unique<LoopbackServer>(config);
    transport = server->transport.get();
    password = server->password;
  } else {
    http_transport = std::make_unique<HttpTransport>(config.target);
    transport = http_transport.get();
  }

  Client teacher{*transport, {}};
  {
    const auto res = teacher.send("POST", "/api/auth/login", json{{"password", password}});
    if (res.status != 200) {
      throw Error(ErrorCode::AuthFailed, "teacher login returned " + std::to_string(res.status));
    }
    teacher.teacher_token = json::parse(res.body).at("token").get<std::string>();
  }

  // Authoring.
  std::vector<std::string> question_ids;
  std::vector<std::vector<std::string>> option_ids;
  for (const auto& q : config.questions) {
    const auto rev = teacher.expect(
        "POST", "/api/questions",
        json{{"text", q.text}, {"kind", to_string(q.kind)}, {"options", q.labels}}, 201);
    question_ids.push_back(rev.at("question_id").get<std::string>());
    std::vector<std::string> opts;
    for (const auto& o : rev.at("options")) {
      opts.push_back(o.at("id").get<std::string>());
    }
    option_ids.push_back(std::move(opts));
  }
  const auto group = teacher.expect(
      "POST", "/api/groups",
      json{{"title", "simulated session"}, {"question_ids", question_ids},
           {"visibility", to_string(config.visibility)}},
      201);
  const auto group_id = group.at("group_id").get<std::string>();
  const auto window = teacher.expect("POST", "/api/groups/" + group_id + "/windows",
                                     json{{"duration_s", config.duration.count()}}, 201);
  const auto window_id = window.at("window_id").get<std::string>();
  const Instant opened_at = parse_iso(window.at("opened_at").get<std::string>());
  const json join = window.contains("join_code") && !window.at("join_code").is_null()
                        ? json{{"join_code", window.at("join_code")}}
                        : json::object();

  // Tokens.
  std::vector<std::string> tokens;
  tokens.reserve(static_cast<std::size_t>(config.participants));
  Client anonymous{*transport, {}};
  for (int p = 0; p < config.participants; ++p) {
    const auto t = anonymous.expect("POST", "/api/windows/" + window_id + "/token", join, 201);
    tokens.push_back(t.at("token").get<std::string>());
  }

  const std::int64_t guard_ms = loopback ? 0 : 500;
  const auto plan = plan_submissions(config, guard_ms);
  std::vector<Outcome> outcomes(plan.size());

  const std::chrono::system_clock::time_point wall_opened = opened_at;
  const auto advance_to = [&](std::int64_t offset_ms) {
    const auto target = opened_at + Millis{offset_ms};
    if (loopback) {
      if (server->clock.now() < target) {
        server->clock.set(target);
      }
    } else {
      std::this_thread::sleep_until(wall_opened + Millis{offset_ms});
    }
  };

  const std::string submit_path = "/api/windows/" + window_id + "/submit";
  const auto send_one = [&](std::size_t i) {
    const auto& s = plan[i];
    json body{{"question_id", question_ids[static_cast<std::size_t>(s.question)]},
              {"idempotency_key", "p" + std::to_string(s.participant) + "-s" + std::to_string(s.seq)}};
    json opts = json::array();
    for (int o : s.options) {
      opts.push_back(option_ids[static_cast<std::size_t>(s.question)][static_cast<std::size_t>(o)]);
    }
    body["options"] = std::move(opts);
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = anonymous.send("POST", submit_path, body,
                                    {{"x-participant-token", tokens[static_cast<std::size_t>(s.participant)]}});
    const auto t1 = std::chrono::steady_clock::now();
    auto& out = outcomes[i];
    out.status = res.status;
    out.latency_us = std::chrono::duration<double, std::micro>(t1 - t0).count();
    const auto j = json::parse(res.body, nullptr, false);
    if (res.status == 200 && !j.is_discarded()) {
      out.accepted = j.value("accepted", false);
      out.replaced = j.value("replaced_prior", false);
    } else if (!j.is_discarded() && j.value("error", std::string()) == "WindowClosed") {
      out.late_rejection = true;
    }
  };

  {
    TaskPool pool(std::min(config.concurrency, config.participants));
    std::size_t i = 0;
    while (i < plan.size()) {
      const auto tick = plan[i].at_ms;
      std::size_t j = i;
      while (j < plan.size() && plan[j].at_ms == tick) {
        ++j;
      }
      advance_to(tick);
      // One task per participant keeps each client's own requests ordered.
      std::map<int, std::vector<std::size_t>> by_participant;
      for (std::size_t k = i; k < j; ++k) {
        by_participant[plan[k].participant].push_back(k);
      }
      std::vector<std::function<void()>> tasks;
      tasks.reserve(by_participant.size());
      for (auto& [participant, indices] : by_participant) {
        tasks.emplace_back([&send_one, idx = std::move(indices)] {
          for (auto k : idx) send_one(k);
        });
      }
      pool.run(tasks);
      i = j;
    }
  }

  // Past the deadline and every late submission, then close.
  advance_to(config.duration.count() * 1000 + guard_ms + 1001);
  {
    const auto res = teacher.send("POST", "/api/windows/" + window_id + "/close", json());
    if (res.status != 200 && res.status != 409) {
      throw Error(ErrorCode::BadRequest, "close returned " + std::to_string(res.status) + ": " + res.body);
    }
  }
  const auto csv = teacher.send("GET", "/api/windows/" + window_id + "/stats.csv", json());
  if (csv.status != 200) {
    throw Error(ErrorCode::BadRequest, "stats.csv returned " + std::to_string(csv.status));
  }

  SimReport report;
  const auto nq = config.questions.size();
  report.expected_counts.resize(nq);
  report.observed_counts.resize(nq);
  report.expected_respondents.assign(nq, 0);
  report.observed_respondents.assign(nq, 0);
  for (std::size_t q = 0; q < nq; ++q) {
    report.expected_counts[q].assign(config.questions[q].labels.size(), 0);
    report.observed_counts[q].assign(config.questions[q].labels.size(), 0);
  }

  // Shadow ledger: last-write-wins over the planned on-time submissions.
  std::map<std::pair<int, int>, const PlannedSubmit*> finals;
  std::vector<double> latencies;
  latencies.reserve(plan.size());
  for (std::size_t i = 0; i < plan.size(); ++i) {
    const auto& s = plan[i];
    const auto& o = outcomes[i];
    ++report.sent;
    report.accepted += o.accepted ? 1 : 0;
    report.replaced += o.replaced ? 1 : 0;
    report.rejected_late += o.late_rejection ? 1 : 0;
    report.rejected_other += (!o.accepted && !o.late_rejection) ? 1 : 0;
    latencies.push_back(o.latency_us);
    if (s.late) {
      ++report.expected_rejected_late;
      continue;
    }
    ++report.expected_accepted;
    auto [it, inserted] = finals.insert_or_assign({s.participant, s.question}, &s);
    report.expected_replaced += inserted ? 0 : 1;
  }
  for (const auto& [key, s] : finals) {
    const auto q = static_cast<std::size_t>(key.second);
    ++report.expected_respondents[q];
    for (int o : s->options) {
      ++report.expected_counts[q][static_cast<std::size_t>(o)];
    }
  }

  const auto rows = parse_csv(csv.body);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() != 8) {
      throw Error(ErrorCode::BadRequest, "malformed CSV row " + std::to_string(r));
    }
    const auto qit = std::find(question_ids.begin(), question_ids.end(), row[2]);
    if (qit == question_ids.end()) {
      continue;
    }
    const auto q = static_cast<std::size_t>(qit - question_ids.begin());
    const auto oit = std::find(option_ids[q].begin(), option_ids[q].end(), row[3]);
    if (oit == option_ids[q].end()) {
      continue;
    }
    report.observed_counts[q][static_cast<std::size_t>(oit - option_ids[q].begin())] = std::stoll(row[5]);
    report.observed_respondents[q] = std::stoll(row[6]);
  }

  const auto check = [&](bool same, const std::string& what) {
    if (!same && report.mismatch.empty()) {
      report.mismatch = what;
    }
  };
  check(report.accepted == report.expected_accepted,
        "accepted: expected " + std::to_string(report.expected_accepted) + ", observed " +
            std::to_string(report.accepted));
  check(report.rejected_late == report.expected_rejected_late,
        "rejected_late: expected " + std::to_string(report.expected_rejected_late) + ", observed " +
            std::to_string(report.rejected_late));
  check(report.replaced == report.expected_replaced,
        "replaced: expected " + std::to_string(report.expected_replaced) + ", observed " +
            std::to_string(report.replaced));
  check(report.rejected_other == 0, "rejected_other: " + std::to_string(report.rejected_other));
  for (std::size_t q = 0; q < nq; ++q) {
    check(report.expected_respondents[q] == report.observed_respondents[q],
          "question " + std::to_string(q) + " respondents: expected " +
              std::to_string(report.expected_respondents[q]) + ", observed " +
              std::to_string(report.observed_respondents[q]));
    check(report.expected_counts[q] == report.observed_counts[q],
          "question " + std::to_string(q) + " counts: expected " +
              describe_counts(report.expected_counts, q) + ", observed " +
              describe_counts(report.observed_counts, q));
  }
  report.equal = report.mismatch.empty();

  std::sort(latencies.begin(), latencies.end());
  report.latency_p50_us = percentile(latencies, 0.50);
  report.latency_p95_us = percentile(latencies, 0.95);
  report.latency_p99_us = percentile(latencies, 0.99);
  report.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall_start).count();
  return report;
}

} // namespace ars::sim
