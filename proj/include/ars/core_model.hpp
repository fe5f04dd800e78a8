#pragma once

#include "ars/error.hpp"
#include "ars/ids.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace ars {

enum class ChoiceKind { SingleChoice, MultipleChoice };
enum class GroupState { Unlocked, Locked };
enum class Visibility { Protected, Public };

std::string_view to_string(ChoiceKind kind) noexcept;
std::string_view to_string(GroupState state) noexcept;
std::string_view to_string(Visibility visibility) noexcept;
// Throw Error(BadRequest) on unknown names.
ChoiceKind parse_choice_kind(std::string_view text);
GroupState parse_group_state(std::string_view text);
Visibility parse_visibility(std::string_view text);

struct AnswerOption {
  OptionId id;
  std::string label;

  bool operator==(const AnswerOption&) const = default;
};

/// Immutable once committed to a pool; edits produce revision + 1.
struct QuestionRevision {
  QuestionId question_id;
  int revision = 1;
  std::string text;
  ChoiceKind kind = ChoiceKind::SingleChoice;
  std::vector<AnswerOption> options;

  const AnswerOption* find_option(const OptionId& id) const;
  /// Position of the option, or -1.
  int option_index(const OptionId& id) const;

  bool operator==(const QuestionRevision&) const = default;
};

struct Violation {
  std::string field;
  std::string message;
  ErrorCode code;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  /// Throws Error with the first violation's code unless ok().
  void throw_if_failed() const;
};

ValidationReport validate_question(std::string_view text,
                                   const std::vector<std::string>& option_labels);
ValidationReport validate_revision(const QuestionRevision& rev);

struct QuestionEdit {
  std::optional<std::string> text;
  std::optional<ChoiceKind> kind;
  std::optional<std::vector<std::string>> option_labels;
};

/// The teacher's question repository. Keeps every revision ever created.
///
/// The draft_* members validate and build a revision without touching the
/// pool; commit() installs it. The engine appends the corresponding event
/// between the two so a failed append leaves the pool unchanged.
class QuestionPool {
public:
  QuestionRevision draft_new(std::string text, ChoiceKind kind,
                             const std::vector<std::string>& option_labels,
                             IdSource& ids) const;
  QuestionRevision draft_edit(const QuestionId& id, const QuestionEdit& edit,
                              IdSource& ids) const;
  /// Requires rev.revision == latest + 1 (or 1 for an unknown id).
  void commit(QuestionRevision rev);

  QuestionRevision make_question(std::string text, ChoiceKind kind,
                                 const std::vector<std::string>& option_labels,
                                 IdSource& ids);
  QuestionRevision edit_question(const QuestionId& id, const QuestionEdit& edit,
                                 IdSource& ids);

  bool contains(const QuestionId& id) const { return history_.contains(id); }
  const QuestionRevision& latest(const QuestionId& id) const;
  const QuestionRevision& revision(const QuestionId& id, int revision) const;
  const std::vector<QuestionRevision>& history(const QuestionId& id) const;
  /// Latest revisions in creation order.
  std::vector<const QuestionRevision*> latest_all() const;
  std::size_t size() const noexcept { return order_.size(); }

  bool operator==(const QuestionPool&) const = default;

private:
  std::map<QuestionId, std::vector<QuestionRevision>> history_;
  std::vector<QuestionId> order_;
};

struct GroupItem {
  QuestionId question_id;
  int revision = 1;

  bool operator==(const GroupItem&) const = default;
};

struct QuestionGroup {
  GroupId group_id;
  std::string title;
  std::vector<GroupItem> items;
  GroupState state = GroupState::Unlocked;
  Visibility visibility = Visibility::Protected;

  const GroupItem* find_item(const QuestionId& id) const;

  bool operator==(const QuestionGroup&) const = default;
};

class GroupRegistry {
public:
  /// Pins each question's current latest revision.
  QuestionGroup draft_compose(std::string title, const std::vector<QuestionId>& question_ids,
                              Visibility visibility, const QuestionPool& pool,
                              IdSource& ids) const;
  void commit(QuestionGroup group);

  QuestionGroup compose_group(std::string title, const std::vector<QuestionId>& question_ids,
                              Visibility visibility, const QuestionPool& pool, IdSource& ids);
  /// Idempotent.
  const QuestionGroup& set_group_state(const GroupId& id, GroupState state);

  const QuestionGroup& get(const GroupId& id) const;
  const QuestionGroup* find(const GroupId& id) const;
  /// Creation order.
  std::vector<const QuestionGroup*> all() const;

  bool operator==(const GroupRegistry&) const = default;

private:
  std::map<GroupId, QuestionGroup> groups_;
  std::vector<GroupId> order_;
};

} // namespace ars
