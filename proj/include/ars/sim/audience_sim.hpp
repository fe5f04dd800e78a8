#pragma once

#include "ars/core_model.hpp"
#include "ars/fraction.hpp"

#include "json.hpp"

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ars::sim {

enum class Arrival { UniformOverWindow, BurstAtOpen, BurstAtDeadline };

/// "uniform" | "burst-open" | "burst-deadline"; throws Error(BadRequest).
Arrival parse_arrival(std::string_view text);
std::string_view to_string(Arrival arrival) noexcept;

struct QuestionPlan {
  std::string text;
  ChoiceKind kind = ChoiceKind::SingleChoice;
  std::vector<std::string> labels;
  /// One entry per label, summing to exactly 1. For multiple choice this is
  /// the distribution each successive (distinct) pick is drawn from.
  std::vector<Fraction> probabilities;
  /// Multiple choice only: picks per participant drawn uniformly from
  /// [1, max_picks].
  int max_picks = 2;
};

/// One single-choice question (1/2, 1/4, 1/8, 1/8) and one multiple-choice
/// question (1/2, 1/3, 1/6).
std::vector<QuestionPlan> default_questions();
/// [{"text":..., "kind":"single"|"multiple", "options":[...],
///   "probabilities":["1/2", ...], "max_picks":2}, ...]
std::vector<QuestionPlan> questions_from_json(const nlohmann::json& j);

struct SimConfig {
  int participants = 100;
  std::vector<QuestionPlan> questions = default_questions();
  Arrival arrival = Arrival::UniformOverWindow;
  double resubmit_probability = 0.0;
  double late_fraction = 0.0;
  std::uint64_t seed = 1;
  /// "loopback" or "http://host:port".
  std::string target = "loopback";
  std::chrono::seconds duration{60};
  /// Concurrent logical clients in flight; capped at `participants`.
  int concurrency = 16;
  /// Required for HTTP targets; loopback servers make their own.
  std::string teacher_password;
  Visibility visibility = Visibility::Protected;
  /// Loopback only: where the event log goes (a temp dir when absent).
  std::optional<std::filesystem::path> data_dir;
};

/// Throws Error(BadRequest) describing the first invalid field.
void validate(const SimConfig& config);

/// Planned submission, generated from the seed alone.
struct PlannedSubmit {
  int participant = 0;
  int question = 0;
  std::vector<int> options;
  /// Milliseconds after the window opened.
  std::int64_t at_ms = 0;
  bool late = false;
  /// Order within the participant's own sequence.
  int seq = 0;
};

/// Guard band keeping planned on-time and late submissions this far from the
/// deadline. Zero with a controllable clock.
std::vector<PlannedSubmit> plan_submissions(const SimConfig& config, std::int64_t guard_ms);

struct SimReport {
  std::int64_t sent = 0;
  std::int64_t accepted = 0;
  std::int64_t rejected_late = 0;
  std::int64_t rejected_other = 0;
  std::int64_t replaced = 0;

  std::int64_t expected_accepted = 0;
  std::int64_t expected_rejected_late = 0;
  std::int64_t expected_replaced = 0;
  /// [question][option], from the simulator's own last-write-wins ledger.
  std::vector<std::vector<std::int64_t>> expected_counts;
  std::vector<std::int64_t> expected_respondents;
  /// [question][option], parsed from the server's CSV export.
  std::vector<std::vector<std::int64_t>> observed_counts;
  std::vector<std::int64_t> observed_respondents;

  bool equal = false;
  /// First divergent counter, empty when equal.
  std::string mismatch;

  double wall_ms = 0;
  double latency_p50_us = 0;
  double latency_p95_us = 0;
  double latency_p99_us = 0;

  nlohmann::json to_json() const;
  /// to_json() without wall time and latency figures.
  nlohmann::json deterministic_json() const;
};

/// Drives a full session (authoring, open, submissions, close, CSV export)
/// and compares the server's counts with the shadow ledger.
/// Throws TargetUnreachable, AuthFailed, BadRequest.
SimReport run_sim(const SimConfig& config);

} // namespace ars::sim
