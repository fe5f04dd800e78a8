#pragma once

#include "ars/engine.hpp"
#include "ars/http/api.hpp"
#include "ars/http/auth.hpp"

#include <random>

namespace ars::testing {

/// An engine over an in-memory log on a manual clock.
struct Harness {
  ManualClock clock;
  SequentialIds ids{"id"};
  MemoryEventLog log;
  Engine engine{EngineState{}, log, clock, ids};

  QuestionRevision single(std::vector<std::string> labels, std::string text = "Pick one");
  QuestionRevision multiple(std::vector<std::string> labels, std::string text = "Pick any");
  GroupId group(const std::vector<QuestionRevision>& questions,
                Visibility visibility = Visibility::Protected);
  AnsweringWindow open(const GroupId& group, std::optional<std::chrono::seconds> duration = std::nullopt);
  SubmissionReceipt vote(const AnsweringWindow& window, const QuestionRevision& q,
                         const std::string& participant, std::vector<int> option_indices);
};

Submission make_submission(const AnsweringWindow& window, const QuestionRevision& q,
                           const std::string& participant, const std::vector<int>& option_indices);

struct RandomSessionSpec {
  int max_questions = 3;
  int max_windows = 3;
  int max_participants = 20;
  int max_actions = 200;
  bool multiple_choice = true;
  /// Leave the last window open.
  bool leave_open = false;
};

/// Drives a random but valid-looking session (with some invalid
/// submissions mixed in) through the engine's public API.
void random_session(Harness& h, std::uint64_t seed, const RandomSessionSpec& spec = {});

/// Harness plus the HTTP routing layer, driven without sockets.
struct ServiceHarness : Harness {
  static constexpr std::string_view kPassword = "correct horse";

  http::TeacherAuth auth{http::hash_password(kPassword, http::HashStrength::Minimal),
                         std::chrono::minutes{30}, clock};
  http::ParticipantRegistry participants{clock, 256};
  http::Api api{engine, auth, participants, http::ApiOptions{}};

  http::ApiResponse call(const std::string& method, const std::string& path,
                         const nlohmann::json& body = nullptr, const std::string& bearer = "",
                         std::map<std::string, std::string> query = {});
  http::ApiResponse submit(const std::string& window_id, const std::string& token,
                           const nlohmann::json& body);
  std::string login();
};

} // namespace ars::testing
