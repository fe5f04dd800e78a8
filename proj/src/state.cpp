#include "ars/state.hpp"

#include "ars/codec.hpp"

namespace ars {
namespace {

void apply_payload(EngineState& state, const Event& event) {
  const auto& p = event.payload;
  switch (event.kind) {
  case EventKind::QuestionCreated:
  case EventKind::QuestionEdited:
    state.pool.commit(p.get<QuestionRevision>());
    break;
  case EventKind::GroupComposed: {
    auto group = p.get<QuestionGroup>();
    for (const auto& item : group.items) {
      state.pool.revision(item.question_id, item.revision);
    }
    state.groups.commit(std::move(group));
    break;
  }
  case EventKind::GroupStateChanged:
    state.groups.set_group_state(GroupId(p.at("group_id").get<std::string>()),
                                 parse_group_state(p.at("state").get<std::string>()));
    break;
  case EventKind::WindowOpened: {
    auto window = p.get<AnsweringWindow>();
    state.groups.get(window.group_id);
    state.sessions.commit_open(std::move(window));
    break;
  }
  case EventKind::ResponseRecorded:
    state.sessions.commit_response(p.get<ResponseRecord>());
    break;
  case EventKind::WindowClosed:
    state.sessions.commit_close(p.get<WindowSummary>());
    break;
  case EventKind::PollPublished:
    state.sessions.set_published(WindowId(p.at("window_id").get<std::string>()),
                                 p.at("published").get<bool>());
    break;
  }
}

} // namespace

void apply_event(EngineState& state, const Event& event) {
  if (event.offset != state.offset + 1) {
    throw Error(ErrorCode::CorruptRecord, "offset " + std::to_string(event.offset) +
                                              " does not follow " + std::to_string(state.offset));
  }
  try {
    apply_payload(state, event);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptRecord,
                "offset " + std::to_string(event.offset) + ": " + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::CorruptRecord,
                "offset " + std::to_string(event.offset) + ": " + e.what());
  }
  state.offset = event.offset;
}

} // namespace ars
