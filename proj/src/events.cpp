#include "ars/events.hpp"

#include "ars/codec.hpp"

#include <array>
#include <utility>

namespace ars {
namespace {

constexpr std::array<std::pair<EventKind, std::string_view>, 8> kKindNames = {{
    {EventKind::QuestionCreated, "QuestionCreated"},
    {EventKind::QuestionEdited, "QuestionEdited"},
    {EventKind::GroupComposed, "GroupComposed"},
    {EventKind::GroupStateChanged, "GroupStateChanged"},
    {EventKind::WindowOpened, "WindowOpened"},
    {EventKind::ResponseRecorded, "ResponseRecorded"},
    {EventKind::WindowClosed, "WindowClosed"},
    {EventKind::PollPublished, "PollPublished"},
}};

void require(bool ok, EventKind kind, const std::string& what) {
  if (!ok) {
    throw Error(ErrorCode::SerializationFailure,
                std::string(to_string(kind)) + " payload: " + what);
  }
}

} // namespace

std::string_view to_string(EventKind kind) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) {
      return name;
    }
  }
  return "Unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view text) noexcept {
  for (const auto& [k, name] : kKindNames) {
    if (name == text) {
      return k;
    }
  }
  return std::nullopt;
}

void validate_payload(EventKind kind, const nlohmann::json& payload) {
  require(payload.is_object(), kind, "not an object");
  try {
    switch (kind) {
    case EventKind::QuestionCreated:
    case EventKind::QuestionEdited: {
      const auto q = payload.get<QuestionRevision>();
      require(validate_revision(q).ok(), kind, "invalid question");
      require(kind == EventKind::QuestionCreated ? q.revision == 1 : q.revision >= 2, kind,
              "revision does not match event kind");
      break;
    }
    case EventKind::GroupComposed: {
      const auto g = payload.get<QuestionGroup>();
      require(!g.group_id.empty() && !g.items.empty(), kind, "empty group");
      break;
    }
    case EventKind::GroupStateChanged:
      require(!payload.at("group_id").get<std::string>().empty(), kind, "missing group_id");
      parse_group_state(payload.at("state").get<std::string>());
      break;
    case EventKind::WindowOpened: {
      const auto w = payload.get<AnsweringWindow>();
      require(!w.window_id.empty() && !w.group_id.empty(), kind, "missing ids");
      break;
    }
    case EventKind::ResponseRecorded: {
      const auto r = payload.get<ResponseRecord>();
      require(!r.window_id.empty() && !r.group_id.empty() && !r.question_id.empty(), kind,
              "missing group/window/question");
      require(!r.options.empty(), kind, "no options");
      break;
    }
    case EventKind::WindowClosed: {
      const auto s = payload.get<WindowSummary>();
      require(s.closed_at >= s.opened_at, kind, "closed before opened");
      break;
    }
    case EventKind::PollPublished:
      require(!payload.at("window_id").get<std::string>().empty(), kind, "missing window_id");
      require(payload.at("published").is_boolean(), kind, "published must be boolean");
      break;
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::SerializationFailure,
                std::string(to_string(kind)) + " payload: " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SerializationFailure) {
      throw;
    }
    throw Error(ErrorCode::SerializationFailure,
                std::string(to_string(kind)) + " payload: " + e.what());
  }
}

} // namespace ars
