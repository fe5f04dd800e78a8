#include "fixtures.hpp"

namespace ars::testing {

QuestionRevision Harness::single(std::vector<std::string> labels, std::string text) {
  return engine.make_question(std::move(text), ChoiceKind::SingleChoice, labels);
}

QuestionRevision Harness::multiple(std::vector<std::string> labels, std::string text) {
  return engine.make_question(std::move(text), ChoiceKind::MultipleChoice, labels);
}

GroupId Harness::group(const std::vector<QuestionRevision>& questions, Visibility visibility) {
  std::vector<QuestionId> ids;
  for (const auto& q : questions) ids.push_back(q.question_id);
  return engine.compose_group("group", ids, visibility).group_id;
}

AnsweringWindow Harness::open(const GroupId& g, std::optional<std::chrono::seconds> duration) {
  return engine.open_window(g, duration);
}

SubmissionReceipt Harness::vote(const AnsweringWindow& window, const QuestionRevision& q,
                                const std::string& participant, std::vector<int> option_indices) {
  return engine.submit(make_submission(window, q, participant, option_indices));
}

Submission make_submission(const AnsweringWindow& window, const QuestionRevision& q,
                           const std::string& participant, const std::vector<int>& option_indices) {
  Submission sub;
  sub.participant_token = participant;
  sub.window_id = window.window_id;
  sub.question_id = q.question_id;
  for (int i : option_indices) {
    sub.selected_options.push_back(q.options.at(static_cast<std::size_t>(i)).id);
  }
  return sub;
}

void random_session(Harness& h, std::uint64_t seed, const RandomSessionSpec& spec) {
  std::mt19937_64 rng(seed);
  const auto uniform = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

  std::vector<QuestionRevision> questions;
  const int nq = uniform(1, spec.max_questions);
  for (int i = 0; i < nq; ++i) {
    std::vector<std::string> labels;
    const int no = uniform(2, 5);
    for (int o = 0; o < no; ++o) labels.push_back("opt" + std::to_string(o));
    const bool multi = spec.multiple_choice && uniform(0, 1) == 1;
    questions.push_back(multi ? h.multiple(labels) : h.single(labels));
  }
  const auto g = h.group(questions);

  const int nw = uniform(1, spec.max_windows);
  for (int w = 0; w < nw; ++w) {
    const bool timed = uniform(0, 2) == 0;
    const auto window = h.open(g, timed ? std::optional(std::chrono::seconds{uniform(1, 5)}) : std::nullopt);
    const int actions = uniform(0, spec.max_actions);
    const int participants = uniform(1, spec.max_participants);
    for (int a = 0; a < actions; ++a) {
      h.clock.advance(Millis{uniform(0, 40)});
      const auto& q = questions[static_cast<std::size_t>(uniform(0, nq - 1))];
      const auto n = static_cast<int>(q.options.size());
      std::vector<int> picks;
      if (uniform(0, 19) == 0) {
        picks = {};  // invalid: empty
      } else if (q.kind == ChoiceKind::SingleChoice) {
        picks = {uniform(0, n - 1)};
      } else {
        for (int o = 0; o < n; ++o) {
          if (uniform(0, 1)) picks.push_back(o);
        }
        if (picks.empty()) picks = {uniform(0, n - 1)};
      }
      h.vote(window, q, "p" + std::to_string(uniform(0, participants - 1)), picks);
    }
    const bool last = w + 1 == nw;
    if (!(last && spec.leave_open)) {
      if (h.engine.window_status(window.window_id).state == WindowState::Open) {
        h.engine.close_window(window.window_id);
      }
    }
    h.clock.advance(Millis{uniform(1, 1000)});
  }
}

http::ApiResponse ServiceHarness::call(const std::string& method, const std::string& path,
                                       const nlohmann::json& body, const std::string& bearer,
                                       std::map<std::string, std::string> query) {
  http::ApiRequest req;
  req.method = method;
  req.path = path;
  req.body = body.is_null() ? "" : body.dump();
  req.query = std::move(query);
  if (!bearer.empty()) {
    req.headers["authorization"] = "Bearer " + bearer;
  }
  return api.handle(req);
}

http::ApiResponse ServiceHarness::submit(const std::string& window_id, const std::string& token,
                                         const nlohmann::json& body) {
  http::ApiRequest req;
  req.method = "POST";
  req.path = "/api/windows/" + window_id + "/submit";
  req.body = body.dump();
  req.headers["x-participant-token"] = token;
  return api.handle(req);
}

std::string ServiceHarness::login() {
  const auto res = call("POST", "/api/auth/login", {{"password", kPassword}});
  return nlohmann::json::parse(res.body).at("token").get<std::string>();
}

} // namespace ars::testing
