#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ars {

enum class ErrorCode {
  // core-model
  EmptyText,
  TooFewOptions,
  EmptyOptionLabel,
  DuplicateOptionId,
  UnknownQuestion,
  DuplicateQuestionInGroup,
  EmptyGroup,
  UnknownGroup,
  // session-engine
  GroupLocked,
  WindowAlreadyOpen,
  WindowClosed,
  UnknownWindow,
  InvalidSelection,
  UnknownQuestionInWindow,
  AlreadyClosed,
  // aggregation
  EmptyFilter,
  InvalidFilter,
  ZeroWidth,
  // persistence
  StorageFull,
  SerializationFailure,
  CorruptRecord,
  SnapshotOffsetMismatch,
  // http-service
  BadCredential,
  AuthRequired,
  Forbidden,
  BadJoinCode,
  BadRequest,
  NotFound,
  RateLimited,
  InvalidConfig,
  // audience-sim
  TargetUnreachable,
  AuthFailed,
  OracleMismatch,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

} // namespace ars
