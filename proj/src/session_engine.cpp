#include "ars/session_engine.hpp"

#include <algorithm>
#include <set>

namespace ars {

std::string_view to_string(WindowState state) noexcept {
  return state == WindowState::Open ? "open" : "closed";
}

std::optional<Instant> AnsweringWindow::deadline() const {
  if (!duration) {
    return std::nullopt;
  }
  return opened_at + std::chrono::duration_cast<Millis>(*duration);
}

Instant clamp_received_at(const WindowRecord& rec, Instant received_at) {
  return std::max({received_at, rec.window.opened_at, rec.responses.last_received_at});
}

AnsweringWindow SessionBook::draft_open(const GroupId& group_id,
                                        std::optional<std::chrono::seconds> duration, Instant now,
                                        const GroupRegistry& groups, IdSource& ids) const {
  const auto& group = groups.get(group_id);
  if (group.state == GroupState::Locked) {
    throw Error(ErrorCode::GroupLocked, "group " + group_id.str() + " is locked");
  }
  if (const auto open = open_window_for(group_id)) {
    throw Error(ErrorCode::WindowAlreadyOpen,
                "group " + group_id.str() + " already has open window " + open->str());
  }
  if (duration && duration->count() <= 0) {
    throw Error(ErrorCode::BadRequest, "duration must be positive");
  }
  AnsweringWindow w;
  w.window_id = WindowId(ids.next_id());
  w.group_id = group_id;
  w.opened_at = now;
  w.duration = duration;
  w.state = WindowState::Open;
  if (group.visibility == Visibility::Protected) {
    w.join_code = ids.join_code();
  }
  return w;
}

void SessionBook::commit_open(AnsweringWindow window) {
  if (windows_.contains(window.window_id)) {
    throw Error(ErrorCode::BadRequest, "window " + window.window_id.str() + " already exists");
  }
  if (window.state == WindowState::Open && open_window_for(window.group_id)) {
    throw Error(ErrorCode::WindowAlreadyOpen, "group already has an open window");
  }
  by_group_[window.group_id].push_back(window.window_id);
  WindowRecord rec;
  rec.responses.last_received_at = window.opened_at;
  rec.window = std::move(window);
  auto id = rec.window.window_id;
  windows_.emplace(std::move(id), std::move(rec));
}

namespace {

SubmissionReceipt reject(SubmissionReceipt receipt, ErrorCode code, std::string detail) {
  receipt.accepted = false;
  receipt.rejection = code;
  receipt.detail = std::move(detail);
  return receipt;
}

std::string idempotency_slot(const std::string& participant, const std::string& key) {
  return participant + '\x1f' + key;
}

} // namespace

SubmitDecision SessionBook::evaluate(const Submission& sub, Instant received_at,
                                     const GroupRegistry& groups, const QuestionPool& pool,
                                     IdSource& ids) const {
  const auto& rec = get(sub.window_id);
  const auto& window = rec.window;
  const Instant at = clamp_received_at(rec, received_at);

  SubmitDecision decision;
  auto& receipt = decision.receipt;
  receipt.window_id = sub.window_id;
  receipt.question_id = sub.question_id;
  receipt.received_at = at;

  if (window.state == WindowState::Closed) {
    receipt.receipt_id = ReceiptId(ids.next_id());
    receipt = reject(receipt, ErrorCode::WindowClosed, "window is closed");
    return decision;
  }
  if (const auto deadline = window.deadline(); deadline && at > *deadline) {
    receipt.receipt_id = ReceiptId(ids.next_id());
    receipt = reject(receipt, ErrorCode::WindowClosed, "received after the deadline");
    decision.deadline_passed = true;
    return decision;
  }
  if (sub.idempotency_key) {
    const auto it =
        rec.responses.receipts_by_key.find(idempotency_slot(sub.participant_token, *sub.idempotency_key));
    if (it != rec.responses.receipts_by_key.end()) {
      decision.receipt = it->second;
      return decision;
    }
  }
  receipt.receipt_id = ReceiptId(ids.next_id());

  const auto& group = groups.get(window.group_id);
  const auto* item = group.find_item(sub.question_id);
  if (item == nullptr) {
    receipt = reject(receipt, ErrorCode::UnknownQuestionInWindow,
                     "question " + sub.question_id.str() + " is not part of this window");
    return decision;
  }
  const auto& question = pool.revision(item->question_id, item->revision);

  if (sub.participant_token.empty()) {
    receipt = reject(receipt, ErrorCode::InvalidSelection, "missing participant");
    return decision;
  }
  if (sub.selected_options.empty()) {
    receipt = reject(receipt, ErrorCode::InvalidSelection, "no option selected");
    return decision;
  }
  if (question.kind == ChoiceKind::SingleChoice && sub.selected_options.size() != 1) {
    receipt = reject(receipt, ErrorCode::InvalidSelection,
                     "single-choice question takes exactly one option");
    return decision;
  }
  std::set<int> positions;
  for (const auto& opt : sub.selected_options) {
    const int idx = question.option_index(opt);
    if (idx < 0) {
      receipt = reject(receipt, ErrorCode::InvalidSelection,
                       "option " + opt.str() + " does not belong to this question");
      return decision;
    }
    if (!positions.insert(idx).second) {
      receipt = reject(receipt, ErrorCode::InvalidSelection, "option selected twice");
      return decision;
    }
  }

  ResponseRecord record;
  record.receipt_id = receipt.receipt_id;
  record.window_id = window.window_id;
  record.group_id = window.group_id;
  record.question_id = sub.question_id;
  record.participant = sub.participant_token;
  for (int idx : positions) {
    record.options.push_back(question.options[static_cast<std::size_t>(idx)].id);
  }
  record.received_at = at;
  record.client_note = sub.client_note;
  record.idempotency_key = sub.idempotency_key;

  receipt.accepted = true;
  receipt.replaced_prior =
      rec.responses.finals.contains(FinalKey{sub.participant_token, sub.question_id});
  decision.record = std::move(record);
  return decision;
}

bool SessionBook::commit_response(const ResponseRecord& record) {
  auto& rec = get_mut(record.window_id);
  if (rec.window.state != WindowState::Open) {
    throw Error(ErrorCode::WindowClosed, "response for closed window " + record.window_id.str());
  }
  auto& r = rec.responses;
  FinalKey key{record.participant, record.question_id};
  auto [it, inserted] = r.finals.insert_or_assign(std::move(key), record);
  if (inserted) {
    ++r.answers_per_participant[record.participant];
  }
  if (record.idempotency_key) {
    SubmissionReceipt receipt;
    receipt.receipt_id = record.receipt_id;
    receipt.window_id = record.window_id;
    receipt.question_id = record.question_id;
    receipt.received_at = record.received_at;
    receipt.accepted = true;
    receipt.replaced_prior = !inserted;
    r.receipts_by_key.emplace(idempotency_slot(record.participant, *record.idempotency_key),
                              std::move(receipt));
  }
  r.last_received_at = std::max(r.last_received_at, record.received_at);
  ++r.accepted;
  ++r.version;
  return !inserted;
}

WindowSummary SessionBook::draft_close(const WindowId& id, Instant at) const {
  const auto& rec = get(id);
  if (rec.window.state == WindowState::Closed) {
    throw Error(ErrorCode::AlreadyClosed, "window " + id.str() + " is already closed");
  }
  Instant closed_at = at;
  if (const auto deadline = rec.window.deadline()) {
    closed_at = std::min(closed_at, *deadline);
  }
  closed_at = std::max({closed_at, rec.window.opened_at, rec.responses.last_received_at});

  WindowSummary s;
  s.window_id = id;
  s.group_id = rec.window.group_id;
  s.opened_at = rec.window.opened_at;
  s.closed_at = closed_at;
  s.respondent_count = static_cast<std::int64_t>(rec.responses.answers_per_participant.size());
  s.responses_flushed = static_cast<std::int64_t>(rec.responses.finals.size());
  return s;
}

void SessionBook::commit_close(const WindowSummary& summary) {
  auto& rec = get_mut(summary.window_id);
  if (rec.window.state == WindowState::Closed) {
    throw Error(ErrorCode::AlreadyClosed, "window " + summary.window_id.str() + " is already closed");
  }
  rec.window.state = WindowState::Closed;
  rec.window.closed_at = summary.closed_at;
  rec.summary = summary;
  ++rec.responses.version;
}

void SessionBook::set_published(const WindowId& id, bool published) {
  auto& rec = get_mut(id);
  rec.window.published = published;
  ++rec.responses.version;
}

void SessionBook::restore(WindowRecord record) {
  if (windows_.contains(record.window.window_id)) {
    throw Error(ErrorCode::BadRequest, "window " + record.window.window_id.str() + " already exists");
  }
  by_group_[record.window.group_id].push_back(record.window.window_id);
  auto id = record.window.window_id;
  windows_.emplace(std::move(id), std::move(record));
}

WindowStatus SessionBook::status(const WindowId& id, Instant now) const {
  const auto& rec = get(id);
  WindowStatus st;
  st.state = rec.window.state;
  st.respondent_count = static_cast<std::int64_t>(rec.responses.answers_per_participant.size());
  if (rec.window.state == WindowState::Open) {
    if (const auto deadline = rec.window.deadline()) {
      st.remaining = std::max(Millis{0}, *deadline - now);
    }
  }
  return st;
}

bool SessionBook::expired(const WindowId& id, Instant now) const {
  const auto& w = get(id).window;
  const auto deadline = w.deadline();
  return w.state == WindowState::Open && deadline && now > *deadline;
}

std::vector<WindowId> SessionBook::expired_windows(Instant now) const {
  std::vector<WindowId> out;
  for (const auto& [id, rec] : windows_) {
    const auto deadline = rec.window.deadline();
    if (rec.window.state == WindowState::Open && deadline && now > *deadline) {
      out.push_back(id);
    }
  }
  return out;
}

const WindowRecord* SessionBook::find(const WindowId& id) const {
  const auto it = windows_.find(id);
  return it == windows_.end() ? nullptr : &it->second;
}

const WindowRecord& SessionBook::get(const WindowId& id) const {
  if (const auto* rec = find(id)) {
    return *rec;
  }
  throw Error(ErrorCode::UnknownWindow, "unknown window " + id.str());
}

WindowRecord& SessionBook::get_mut(const WindowId& id) {
  const auto it = windows_.find(id);
  if (it == windows_.end()) {
    throw Error(ErrorCode::UnknownWindow, "unknown window " + id.str());
  }
  return it->second;
}

std::optional<WindowId> SessionBook::open_window_for(const GroupId& group_id) const {
  const auto it = by_group_.find(group_id);
  if (it == by_group_.end()) {
    return std::nullopt;
  }
  for (const auto& wid : it->second) {
    if (windows_.at(wid).window.state == WindowState::Open) {
      return wid;
    }
  }
  return std::nullopt;
}

std::vector<WindowId> SessionBook::windows_of(const GroupId& group_id) const {
  const auto it = by_group_.find(group_id);
  return it == by_group_.end() ? std::vector<WindowId>{} : it->second;
}

} // namespace ars
