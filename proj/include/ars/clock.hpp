#pragma once

#include <atomic>
#include <chrono>
#include <string>
#include <string_view>

namespace ars {

/// Wall-clock instant, UTC, millisecond precision.
using Instant = std::chrono::sys_time<std::chrono::milliseconds>;
using Millis = std::chrono::milliseconds;

class Clock {
public:
  virtual ~Clock() = default;
  virtual Instant now() const = 0;
};

class SystemClock final : public Clock {
public:
  Instant now() const override;
};

/// Clock that only moves when told to. Thread-safe.
class ManualClock final : public Clock {
public:
  explicit ManualClock(Instant start = Instant{Millis{1'700'000'000'000}})
      : ms_(start.time_since_epoch().count()) {}

  Instant now() const override { return Instant{Millis{ms_.load()}}; }
  void set(Instant t) { ms_.store(t.time_since_epoch().count()); }
  void advance(Millis d) { ms_.fetch_add(d.count()); }

private:
  std::atomic<std::int64_t> ms_;
};

/// "2026-10-15T08:30:00.250Z"
std::string format_iso(Instant t);
/// Accepts the format produced by format_iso; fractional digits optional.
/// Throws Error(BadRequest) on malformed input.
Instant parse_iso(std::string_view text);

} // namespace ars
