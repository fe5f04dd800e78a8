#pragma once

#include "ars/clock.hpp"
#include "ars/core_model.hpp"

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ars {

enum class WindowState { Open, Closed };

std::string_view to_string(WindowState state) noexcept;

struct AnsweringWindow {
  WindowId window_id;
  GroupId group_id;
  Instant opened_at;
  /// Absent for open-ended (homework) windows.
  std::optional<std::chrono::seconds> duration;
  WindowState state = WindowState::Open;
  std::optional<Instant> closed_at;
  /// Issued for Protected groups only.
  std::optional<std::string> join_code;
  bool published = false;

  std::optional<Instant> deadline() const;

  bool operator==(const AnsweringWindow&) const = default;
};

struct Submission {
  std::string participant_token;
  WindowId window_id;
  QuestionId question_id;
  std::vector<OptionId> selected_options;
  std::optional<std::string> client_note;
  /// Retries carrying the same key return the original receipt.
  std::optional<std::string> idempotency_key;
};

/// One accepted submission, as persisted. Options are in question order.
struct ResponseRecord {
  ReceiptId receipt_id;
  WindowId window_id;
  GroupId group_id;
  QuestionId question_id;
  std::string participant;
  std::vector<OptionId> options;
  Instant received_at;
  std::optional<std::string> client_note;
  std::optional<std::string> idempotency_key;

  bool operator==(const ResponseRecord&) const = default;
};

struct SubmissionReceipt {
  ReceiptId receipt_id;
  WindowId window_id;
  QuestionId question_id;
  Instant received_at;
  bool accepted = false;
  bool replaced_prior = false;
  std::optional<ErrorCode> rejection;
  std::string detail;

  bool operator==(const SubmissionReceipt&) const = default;
};

struct WindowSummary {
  WindowId window_id;
  GroupId group_id;
  Instant opened_at;
  Instant closed_at;
  std::int64_t respondent_count = 0;
  /// Final responses (one per participant and question) at close.
  std::int64_t responses_flushed = 0;

  bool operator==(const WindowSummary&) const = default;
};

struct WindowStatus {
  WindowState state = WindowState::Open;
  std::optional<Millis> remaining;
  std::int64_t respondent_count = 0;
};

struct FinalKey {
  std::string participant;
  QuestionId question_id;

  auto operator<=>(const FinalKey&) const = default;
};

/// Per-window response state under last-write-wins.
struct WindowResponses {
  std::map<FinalKey, ResponseRecord> finals;
  /// (participant, idempotency key) -> receipt of the first accepted attempt.
  std::map<std::string, SubmissionReceipt> receipts_by_key;
  std::map<std::string, std::int64_t> answers_per_participant;
  Instant last_received_at;
  std::int64_t accepted = 0;
  /// Bumped on every observable change (response, close, publish).
  std::uint64_t version = 0;

  bool operator==(const WindowResponses&) const = default;
};

struct WindowRecord {
  AnsweringWindow window;
  WindowResponses responses;
  std::optional<WindowSummary> summary;

  bool operator==(const WindowRecord&) const = default;
};

struct SubmitDecision {
  SubmissionReceipt receipt;
  /// Present when the submission must be persisted and committed.
  std::optional<ResponseRecord> record;
  /// The window is still Open but the receipt time is past its deadline.
  bool deadline_passed = false;
};

/// Answering windows and their responses. Not thread-safe; the engine
/// serializes access.
class SessionBook {
public:
  /// Throws UnknownGroup, GroupLocked, WindowAlreadyOpen.
  AnsweringWindow draft_open(const GroupId& group_id, std::optional<std::chrono::seconds> duration,
                             Instant now, const GroupRegistry& groups, IdSource& ids) const;
  void commit_open(AnsweringWindow window);

  /// Throws UnknownWindow; every other failure is a rejected receipt.
  SubmitDecision evaluate(const Submission& sub, Instant received_at, const GroupRegistry& groups,
                          const QuestionPool& pool, IdSource& ids) const;
  /// Last-write-wins per (participant, question). Returns replaced_prior.
  bool commit_response(const ResponseRecord& record);

  /// closed_at = min(at, deadline), never earlier than an accepted response.
  /// Throws UnknownWindow, AlreadyClosed.
  WindowSummary draft_close(const WindowId& id, Instant at) const;
  void commit_close(const WindowSummary& summary);

  void set_published(const WindowId& id, bool published);

  /// Reinstalls a record verbatim (snapshot loading). Records of one group
  /// must be restored in opening order.
  void restore(WindowRecord record);

  WindowStatus status(const WindowId& id, Instant now) const;
  /// Open with a deadline strictly before `now`.
  bool expired(const WindowId& id, Instant now) const;
  std::vector<WindowId> expired_windows(Instant now) const;

  const WindowRecord& get(const WindowId& id) const;
  const WindowRecord* find(const WindowId& id) const;
  std::optional<WindowId> open_window_for(const GroupId& group_id) const;
  /// Windows of the group in opening order.
  std::vector<WindowId> windows_of(const GroupId& group_id) const;
  const std::map<WindowId, WindowRecord>& all() const noexcept { return windows_; }

  bool operator==(const SessionBook&) const = default;

private:
  WindowRecord& get_mut(const WindowId& id);

  std::map<WindowId, WindowRecord> windows_;
  std::map<GroupId, std::vector<WindowId>> by_group_;
};

/// Effective receipt time: never before the window opened or before the
/// previous accepted response of the same window.
Instant clamp_received_at(const WindowRecord& rec, Instant received_at);

} // namespace ars
