#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>

namespace ars {

class Clock;

/// Opaque string identifier tagged by the entity it names.
template <typename Tag>
class Id {
public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  auto operator<=>(const Id&) const = default;

private:
  std::string value_;
};

using QuestionId = Id<struct QuestionTag>;
using OptionId = Id<struct OptionTag>;
using GroupId = Id<struct GroupTag>;
using WindowId = Id<struct WindowTag>;
using ReceiptId = Id<struct ReceiptTag>;

/// Source of fresh identifiers and join codes for the engine.
class IdSource {
public:
  virtual ~IdSource() = default;
  virtual std::string next_id() = 0;
  /// Six characters from an alphabet without look-alike glyphs.
  virtual std::string join_code() = 0;
};

/// ULID-style identifiers: 48-bit millisecond timestamp + 80 random bits,
/// Crockford base32, monotonic within one millisecond.
class UlidSource final : public IdSource {
public:
  explicit UlidSource(const Clock& clock);
  std::string next_id() override;
  std::string join_code() override;

private:
  const Clock& clock_;
  std::mutex mu_;
  std::mt19937_64 rng_;
  std::int64_t last_ms_ = -1;
  std::uint64_t rand_hi_ = 0; // 16 bits used
  std::uint64_t rand_lo_ = 0; // 64 bits used
};

/// Predictable "<prefix><counter>" identifiers for tests and simulations.
class SequentialIds final : public IdSource {
public:
  explicit SequentialIds(std::string prefix = "id") : prefix_(std::move(prefix)) {}
  std::string next_id() override;
  std::string join_code() override;

private:
  std::mutex mu_;
  std::string prefix_;
  std::uint64_t next_ = 1;
  std::uint64_t next_code_ = 1;
};

inline constexpr std::string_view kJoinCodeAlphabet = "23456789ABCDEFGHJKMNPQRSTUVWXYZ";

} // namespace ars

template <typename Tag>
struct std::hash<ars::Id<Tag>> {
  std::size_t operator()(const ars::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
