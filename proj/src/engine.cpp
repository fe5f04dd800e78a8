#include "ars/engine.hpp"

#include "ars/codec.hpp"

#include <mutex>

namespace ars {

Engine::Engine(EngineState state, EventLog& log, const Clock& clock, IdSource& ids)
    : state_(std::move(state)), log_(log), clock_(clock), ids_(ids) {
  if (log_.last_offset() != state_.offset) {
    throw Error(ErrorCode::SnapshotOffsetMismatch,
                "state covers offset " + std::to_string(state_.offset) + " but the log ends at " +
                    std::to_string(log_.last_offset()));
  }
}

void Engine::commit(EventKind kind, const nlohmann::json& payload) {
  const auto at = clock_.now();
  const auto offset = log_.append(kind, payload, at);
  apply_event(state_, Event{offset, at, kind, payload});
  changed_.notify_all();
}

QuestionRevision Engine::make_question(std::string text, ChoiceKind kind,
                                       const std::vector<std::string>& option_labels) {
  std::unique_lock lock(mu_);
  auto rev = state_.pool.draft_new(std::move(text), kind, option_labels, ids_);
  commit(EventKind::QuestionCreated, rev);
  return rev;
}

QuestionRevision Engine::edit_question(const QuestionId& id, const QuestionEdit& edit) {
  std::unique_lock lock(mu_);
  auto rev = state_.pool.draft_edit(id, edit, ids_);
  commit(EventKind::QuestionEdited, rev);
  return rev;
}

QuestionGroup Engine::compose_group(std::string title, const std::vector<QuestionId>& question_ids,
                                    Visibility visibility) {
  std::unique_lock lock(mu_);
  auto group = state_.groups.draft_compose(std::move(title), question_ids, visibility,
                                           state_.pool, ids_);
  commit(EventKind::GroupComposed, group);
  return group;
}

QuestionGroup Engine::set_group_state(const GroupId& id, GroupState state) {
  std::unique_lock lock(mu_);
  state_.groups.get(id);
  commit(EventKind::GroupStateChanged,
         nlohmann::json{{"group_id", id.str()}, {"state", to_string(state)}});
  return state_.groups.get(id);
}

AnsweringWindow Engine::open_window(const GroupId& group_id,
                                    std::optional<std::chrono::seconds> duration) {
  std::unique_lock lock(mu_);
  const auto now = clock_.now();
  if (const auto open = state_.sessions.open_window_for(group_id);
      open && state_.sessions.expired(*open, now)) {
    close_locked(*open, now);
  }
  auto window = state_.sessions.draft_open(group_id, duration, now, state_.groups, ids_);
  commit(EventKind::WindowOpened, window);
  return window;
}

SubmissionReceipt Engine::submit(const Submission& sub) { return submit_at(sub, clock_.now()); }

SubmissionReceipt Engine::submit_at(const Submission& sub, Instant received_at) {
  std::unique_lock lock(mu_);
  auto decision =
      state_.sessions.evaluate(sub, received_at, state_.groups, state_.pool, ids_);
  if (decision.deadline_passed) {
    close_locked(sub.window_id, decision.receipt.received_at);
  }
  if (decision.record) {
    commit(EventKind::ResponseRecorded, *decision.record);
  }
  return decision.receipt;
}

void Engine::close_locked(const WindowId& id, Instant at) {
  const auto summary = state_.sessions.draft_close(id, at);
  commit(EventKind::WindowClosed, summary);
}

WindowSummary Engine::close_window(const WindowId& id) { return close_window(id, clock_.now()); }

WindowSummary Engine::close_window(const WindowId& id, Instant at) {
  std::unique_lock lock(mu_);
  if (state_.sessions.expired(id, at)) {
    // The deadline already closed it; record that before refusing.
    close_locked(id, at);
    throw Error(ErrorCode::AlreadyClosed, "window " + id.str() + " closed at its deadline");
  }
  close_locked(id, at);
  return *state_.sessions.get(id).summary;
}

WindowStatus Engine::window_status(const WindowId& id) { return window_view(id).status; }

WindowView Engine::window_view(const WindowId& id) {
  const auto now = clock_.now();
  {
    std::shared_lock lock(mu_);
    if (!state_.sessions.expired(id, now)) {
      const auto& rec = state_.sessions.get(id);
      return {rec.window, state_.sessions.status(id, now), rec.responses.version};
    }
  }
  std::unique_lock lock(mu_);
  if (state_.sessions.expired(id, now)) {
    close_locked(id, now);
  }
  const auto& rec = state_.sessions.get(id);
  return {rec.window, state_.sessions.status(id, now), rec.responses.version};
}

std::optional<WindowSummary> Engine::summary(const WindowId& id) const {
  std::shared_lock lock(mu_);
  return state_.sessions.get(id).summary;
}

void Engine::set_published(const WindowId& id, bool published) {
  std::unique_lock lock(mu_);
  state_.sessions.get(id);
  commit(EventKind::PollPublished,
         nlohmann::json{{"window_id", id.str()}, {"published", published}});
}

std::size_t Engine::sweep_expired() {
  const auto now = clock_.now();
  {
    std::shared_lock lock(mu_);
    if (state_.sessions.expired_windows(now).empty()) {
      return 0;
    }
  }
  std::unique_lock lock(mu_);
  const auto expired = state_.sessions.expired_windows(now);
  for (const auto& id : expired) {
    close_locked(id, now);
  }
  return expired.size();
}

TabulatedStats Engine::tabulate(const StatsFilter& filter) const {
  std::shared_lock lock(mu_);
  return ars::tabulate(state_, filter);
}

StatsComparison Engine::compare(const StatsFilter& left, const StatsFilter& right) const {
  std::shared_lock lock(mu_);
  return ars::compare(state_, left, right);
}

std::uint64_t Engine::wait_for_change(const WindowId& id, std::uint64_t seen,
                                      std::chrono::milliseconds timeout) const {
  std::shared_lock lock(mu_);
  const auto version = [&] { return state_.sessions.get(id).responses.version; };
  changed_.wait_for(lock, timeout, [&] { return version() != seen; });
  return version();
}

EngineState Engine::state_copy() const {
  std::shared_lock lock(mu_);
  return state_;
}

QuestionGroup Engine::group(const GroupId& id) const {
  std::shared_lock lock(mu_);
  return state_.groups.get(id);
}

std::vector<QuestionRevision> Engine::questions() const {
  std::shared_lock lock(mu_);
  std::vector<QuestionRevision> out;
  for (const auto* q : state_.pool.latest_all()) {
    out.push_back(*q);
  }
  return out;
}

std::string Engine::snapshot_blob() const {
  std::shared_lock lock(mu_);
  return snapshot(state_);
}

} // namespace ars
