#pragma once

#include "ars/aggregation.hpp"
#include "ars/clock.hpp"
#include "ars/persistence.hpp"
#include "ars/state.hpp"

#include <chrono>
#include <condition_variable>
#include <optional>
#include <shared_mutex>

namespace ars {

struct WindowView {
  AnsweringWindow window;
  WindowStatus status;
  std::uint64_t version = 0;
};

/// Thread-safe facade over the domain modules. Every mutation is appended to
/// the event log first and then applied through apply_event, so the live state
/// and a replay of the log cannot diverge.
class Engine {
public:
  /// Requires log.last_offset() == state.offset.
  Engine(EngineState state, EventLog& log, const Clock& clock, IdSource& ids);

  // authoring
  QuestionRevision make_question(std::string text, ChoiceKind kind,
                                 const std::vector<std::string>& option_labels);
  QuestionRevision edit_question(const QuestionId& id, const QuestionEdit& edit);
  QuestionGroup compose_group(std::string title, const std::vector<QuestionId>& question_ids,
                              Visibility visibility);
  QuestionGroup set_group_state(const GroupId& id, GroupState state);

  // sessions
  AnsweringWindow open_window(const GroupId& group_id,
                              std::optional<std::chrono::seconds> duration);
  /// Receipt time taken from the engine clock.
  SubmissionReceipt submit(const Submission& sub);
  /// Receipt time supplied by the caller (clamped to be non-decreasing per
  /// window). Throws UnknownWindow.
  SubmissionReceipt submit_at(const Submission& sub, Instant received_at);
  WindowSummary close_window(const WindowId& id);
  WindowSummary close_window(const WindowId& id, Instant at);
  /// Closes expired windows first (lazy deadline enforcement).
  WindowStatus window_status(const WindowId& id);
  WindowView window_view(const WindowId& id);
  std::optional<WindowSummary> summary(const WindowId& id) const;
  void set_published(const WindowId& id, bool published);
  /// Closes every window whose deadline has passed. Returns how many.
  std::size_t sweep_expired();

  // statistics
  TabulatedStats tabulate(const StatsFilter& filter) const;
  StatsComparison compare(const StatsFilter& left, const StatsFilter& right) const;

  /// Blocks until the window's version differs from `seen` or the timeout
  /// elapses. Returns the current version. Throws UnknownWindow.
  std::uint64_t wait_for_change(const WindowId& id, std::uint64_t seen,
                                std::chrono::milliseconds timeout) const;

  /// Consistent copies for read-mostly callers.
  EngineState state_copy() const;
  QuestionGroup group(const GroupId& id) const;
  std::vector<QuestionRevision> questions() const;
  std::string snapshot_blob() const;

  const Clock& clock() const noexcept { return clock_; }

private:
  void commit(EventKind kind, const nlohmann::json& payload);
  void close_locked(const WindowId& id, Instant at);

  mutable std::shared_mutex mu_;
  mutable std::condition_variable_any changed_;
  EngineState state_;
  EventLog& log_;
  const Clock& clock_;
  IdSource& ids_;
};

} // namespace ars
