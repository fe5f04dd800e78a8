#include "ars/core_model.hpp"

#include <algorithm>
#include <set>

namespace ars {

std::string_view to_string(ChoiceKind kind) noexcept {
  return kind == ChoiceKind::SingleChoice ? "single" : "multiple";
}

std::string_view to_string(GroupState state) noexcept {
  return state == GroupState::Locked ? "locked" : "unlocked";
}

std::string_view to_string(Visibility visibility) noexcept {
  return visibility == Visibility::Public ? "public" : "protected";
}

ChoiceKind parse_choice_kind(std::string_view text) {
  if (text == "single") return ChoiceKind::SingleChoice;
  if (text == "multiple") return ChoiceKind::MultipleChoice;
  throw Error(ErrorCode::BadRequest, "unknown question kind: " + std::string(text));
}

GroupState parse_group_state(std::string_view text) {
  if (text == "locked") return GroupState::Locked;
  if (text == "unlocked") return GroupState::Unlocked;
  throw Error(ErrorCode::BadRequest, "unknown group state: " + std::string(text));
}

Visibility parse_visibility(std::string_view text) {
  if (text == "public") return Visibility::Public;
  if (text == "protected") return Visibility::Protected;
  throw Error(ErrorCode::BadRequest, "unknown visibility: " + std::string(text));
}

const AnswerOption* QuestionRevision::find_option(const OptionId& id) const {
  const auto it = std::find_if(options.begin(), options.end(),
                               [&](const AnswerOption& o) { return o.id == id; });
  return it == options.end() ? nullptr : &*it;
}

int QuestionRevision::option_index(const OptionId& id) const {
  for (std::size_t i = 0; i < options.size(); ++i) {
    if (options[i].id == id) {
      return static_cast<int>(i);
    }
  }
  return -1;
}

void ValidationReport::throw_if_failed() const {
  if (!ok()) {
    const auto& v = violations.front();
    throw Error(v.code, v.field + ": " + v.message);
  }
}

namespace {

bool blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

} // namespace

ValidationReport validate_question(std::string_view text,
                                   const std::vector<std::string>& option_labels) {
  ValidationReport report;
  if (blank(text)) {
    report.violations.push_back({"text", "question text must not be empty", ErrorCode::EmptyText});
  }
  if (option_labels.size() < 2) {
    report.violations.push_back(
        {"options", "at least two answer options are required", ErrorCode::TooFewOptions});
  }
  for (std::size_t i = 0; i < option_labels.size(); ++i) {
    if (blank(option_labels[i])) {
      report.violations.push_back({"options[" + std::to_string(i) + "]",
                                   "option label must not be empty", ErrorCode::EmptyOptionLabel});
    }
  }
  return report;
}

ValidationReport validate_revision(const QuestionRevision& rev) {
  std::vector<std::string> labels;
  labels.reserve(rev.options.size());
  for (const auto& o : rev.options) {
    labels.push_back(o.label);
  }
  auto report = validate_question(rev.text, labels);
  std::set<OptionId> seen;
  for (const auto& o : rev.options) {
    if (!seen.insert(o.id).second) {
      report.violations.push_back(
          {"options", "duplicate option id " + o.id.str(), ErrorCode::DuplicateOptionId});
    }
  }
  if (rev.revision < 1) {
    report.violations.push_back({"revision", "revision must be >= 1", ErrorCode::BadRequest});
  }
  return report;
}

QuestionRevision QuestionPool::draft_new(std::string text, ChoiceKind kind,
                                         const std::vector<std::string>& option_labels,
                                         IdSource& ids) const {
  validate_question(text, option_labels).throw_if_failed();
  QuestionRevision rev;
  rev.question_id = QuestionId(ids.next_id());
  rev.revision = 1;
  rev.text = std::move(text);
  rev.kind = kind;
  for (const auto& label : option_labels) {
    rev.options.push_back({OptionId(ids.next_id()), label});
  }
  return rev;
}

QuestionRevision QuestionPool::draft_edit(const QuestionId& id, const QuestionEdit& edit,
                                          IdSource& ids) const {
  const auto& prev = latest(id);
  QuestionRevision rev = prev;
  rev.revision = prev.revision + 1;
  if (edit.text) {
    rev.text = *edit.text;
  }
  if (edit.kind) {
    rev.kind = *edit.kind;
  }
  if (edit.option_labels) {
    validate_question(rev.text, *edit.option_labels).throw_if_failed();
    // Labels carried over from the previous revision keep their option id.
    std::vector<AnswerOption> options;
    std::set<OptionId> used;
    for (const auto& label : *edit.option_labels) {
      auto it = std::find_if(prev.options.begin(), prev.options.end(), [&](const AnswerOption& o) {
        return o.label == label && !used.contains(o.id);
      });
      if (it != prev.options.end()) {
        used.insert(it->id);
        options.push_back(*it);
      } else {
        options.push_back({OptionId(ids.next_id()), label});
      }
    }
    rev.options = std::move(options);
  }
  validate_revision(rev).throw_if_failed();
  return rev;
}

void QuestionPool::commit(QuestionRevision rev) {
  validate_revision(rev).throw_if_failed();
  auto& revisions = history_[rev.question_id];
  const int expected = static_cast<int>(revisions.size()) + 1;
  if (rev.revision != expected) {
    if (revisions.empty()) {
      history_.erase(rev.question_id);
    }
    throw Error(ErrorCode::BadRequest, "revision " + std::to_string(rev.revision) +
                                           " does not follow " + std::to_string(expected - 1));
  }
  if (revisions.empty()) {
    order_.push_back(rev.question_id);
  }
  revisions.push_back(std::move(rev));
}

QuestionRevision QuestionPool::make_question(std::string text, ChoiceKind kind,
                                             const std::vector<std::string>& option_labels,
                                             IdSource& ids) {
  auto rev = draft_new(std::move(text), kind, option_labels, ids);
  commit(rev);
  return rev;
}

QuestionRevision QuestionPool::edit_question(const QuestionId& id, const QuestionEdit& edit,
                                             IdSource& ids) {
  auto rev = draft_edit(id, edit, ids);
  commit(rev);
  return rev;
}

const std::vector<QuestionRevision>& QuestionPool::history(const QuestionId& id) const {
  const auto it = history_.find(id);
  if (it == history_.end()) {
    throw Error(ErrorCode::UnknownQuestion, "unknown question " + id.str());
  }
  return it->second;
}

const QuestionRevision& QuestionPool::latest(const QuestionId& id) const {
  return history(id).back();
}

const QuestionRevision& QuestionPool::revision(const QuestionId& id, int revision) const {
  const auto& revs = history(id);
  if (revision < 1 || revision > static_cast<int>(revs.size())) {
    throw Error(ErrorCode::UnknownQuestion,
                "unknown revision " + std::to_string(revision) + " of " + id.str());
  }
  return revs[static_cast<std::size_t>(revision - 1)];
}

std::vector<const QuestionRevision*> QuestionPool::latest_all() const {
  std::vector<const QuestionRevision*> out;
  out.reserve(order_.size());
  for (const auto& id : order_) {
    out.push_back(&history_.at(id).back());
  }
  return out;
}

const GroupItem* QuestionGroup::find_item(const QuestionId& id) const {
  const auto it = std::find_if(items.begin(), items.end(),
                               [&](const GroupItem& g) { return g.question_id == id; });
  return it == items.end() ? nullptr : &*it;
}

QuestionGroup GroupRegistry::draft_compose(std::string title,
                                           const std::vector<QuestionId>& question_ids,
                                           Visibility visibility, const QuestionPool& pool,
                                           IdSource& ids) const {
  if (question_ids.empty()) {
    throw Error(ErrorCode::EmptyGroup, "a group needs at least one question");
  }
  QuestionGroup group;
  std::set<QuestionId> seen;
  for (const auto& qid : question_ids) {
    if (!pool.contains(qid)) {
      throw Error(ErrorCode::UnknownQuestion, "unknown question " + qid.str());
    }
    if (!seen.insert(qid).second) {
      throw Error(ErrorCode::DuplicateQuestionInGroup, "question " + qid.str() + " listed twice");
    }
    group.items.push_back({qid, pool.latest(qid).revision});
  }
  group.group_id = GroupId(ids.next_id());
  group.title = std::move(title);
  group.state = GroupState::Unlocked;
  group.visibility = visibility;
  return group;
}

void GroupRegistry::commit(QuestionGroup group) {
  if (groups_.contains(group.group_id)) {
    throw Error(ErrorCode::BadRequest, "group " + group.group_id.str() + " already exists");
  }
  order_.push_back(group.group_id);
  auto id = group.group_id;
  groups_.emplace(std::move(id), std::move(group));
}

QuestionGroup GroupRegistry::compose_group(std::string title,
                                           const std::vector<QuestionId>& question_ids,
                                           Visibility visibility, const QuestionPool& pool,
                                           IdSource& ids) {
  auto group = draft_compose(std::move(title), question_ids, visibility, pool, ids);
  commit(group);
  return group;
}

const QuestionGroup& GroupRegistry::set_group_state(const GroupId& id, GroupState state) {
  auto it = groups_.find(id);
  if (it == groups_.end()) {
    throw Error(ErrorCode::UnknownGroup, "unknown group " + id.str());
  }
  it->second.state = state;
  return it->second;
}

const QuestionGroup* GroupRegistry::find(const GroupId& id) const {
  const auto it = groups_.find(id);
  return it == groups_.end() ? nullptr : &it->second;
}

const QuestionGroup& GroupRegistry::get(const GroupId& id) const {
  if (const auto* g = find(id)) {
    return *g;
  }
  throw Error(ErrorCode::UnknownGroup, "unknown group " + id.str());
}

std::vector<const QuestionGroup*> GroupRegistry::all() const {
  std::vector<const QuestionGroup*> out;
  out.reserve(order_.size());
  for (const auto& id : order_) {
    out.push_back(&groups_.at(id));
  }
  return out;
}

} // namespace ars
