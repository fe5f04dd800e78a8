#include "ars/error.hpp"

namespace ars {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::EmptyText: return "EmptyText";
  case ErrorCode::TooFewOptions: return "TooFewOptions";
  case ErrorCode::EmptyOptionLabel: return "EmptyOptionLabel";
  case ErrorCode::DuplicateOptionId: return "DuplicateOptionId";
  case ErrorCode::UnknownQuestion: return "UnknownQuestion";
  case ErrorCode::DuplicateQuestionInGroup: return "DuplicateQuestionInGroup";
  case ErrorCode::EmptyGroup: return "EmptyGroup";
  case ErrorCode::UnknownGroup: return "UnknownGroup";
  case ErrorCode::GroupLocked: return "GroupLocked";
  case ErrorCode::WindowAlreadyOpen: return "WindowAlreadyOpen";
  case ErrorCode::WindowClosed: return "WindowClosed";
  case ErrorCode::UnknownWindow: return "UnknownWindow";
  case ErrorCode::InvalidSelection: return "InvalidSelection";
  case ErrorCode::UnknownQuestionInWindow: return "UnknownQuestionInWindow";
  case ErrorCode::AlreadyClosed: return "AlreadyClosed";
  case ErrorCode::EmptyFilter: return "EmptyFilter";
  case ErrorCode::InvalidFilter: return "InvalidFilter";
  case ErrorCode::ZeroWidth: return "ZeroWidth";
  case ErrorCode::StorageFull: return "StorageFull";
  case ErrorCode::SerializationFailure: return "SerializationFailure";
  case ErrorCode::CorruptRecord: return "CorruptRecord";
  case ErrorCode::SnapshotOffsetMismatch: return "SnapshotOffsetMismatch";
  case ErrorCode::BadCredential: return "BadCredential";
  case ErrorCode::AuthRequired: return "AuthRequired";
  case ErrorCode::Forbidden: return "Forbidden";
  case ErrorCode::BadJoinCode: return "BadJoinCode";
  case ErrorCode::BadRequest: return "BadRequest";
  case ErrorCode::NotFound: return "NotFound";
  case ErrorCode::RateLimited: return "RateLimited";
  case ErrorCode::InvalidConfig: return "InvalidConfig";
  case ErrorCode::TargetUnreachable: return "TargetUnreachable";
  case ErrorCode::AuthFailed: return "AuthFailed";
  case ErrorCode::OracleMismatch: return "OracleMismatch";
  }
  return "Unknown";
}

} // namespace ars
