#pragma once

#include "ars/core_model.hpp"
#include "ars/events.hpp"
#include "ars/session_engine.hpp"

#include <cstdint>

namespace ars {

/// Everything the engine knows. Reconstructible from the event log alone.
struct EngineState {
  QuestionPool pool;
  GroupRegistry groups;
  SessionBook sessions;
  /// Offset of the last applied event; 0 for an empty log.
  std::uint64_t offset = 0;

  bool operator==(const EngineState&) const = default;
};

/// The single mutation path, shared by the live engine and replay.
/// Throws Error(CorruptRecord) on an offset gap or a payload that does not
/// apply to the current state.
void apply_event(EngineState& state, const Event& event);

} // namespace ars
