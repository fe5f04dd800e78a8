#pragma once

#include "ars/clock.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace ars {

enum class EventKind {
  QuestionCreated,
  QuestionEdited,
  GroupComposed,
  GroupStateChanged,
  WindowOpened,
  ResponseRecorded,
  WindowClosed,
  PollPublished,
};

std::string_view to_string(EventKind kind) noexcept;
std::optional<EventKind> parse_event_kind(std::string_view text) noexcept;

struct Event {
  std::uint64_t offset = 0;
  Instant recorded_at;
  EventKind kind = EventKind::QuestionCreated;
  nlohmann::json payload;

  bool operator==(const Event&) const = default;
};

/// Throws Error(SerializationFailure) unless the payload decodes as the
/// domain record for `kind`.
void validate_payload(EventKind kind, const nlohmann::json& payload);

} // namespace ars
