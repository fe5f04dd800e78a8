#pragma once

#include "ars/events.hpp"
#include "ars/state.hpp"

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ars {

inline constexpr std::string_view kLogHeader = "arslog v1";
inline constexpr std::string_view kSnapshotHeader = "arssnap v1";

/// Append-only, writer-serialized event sink.
class EventLog {
public:
  virtual ~EventLog() = default;
  /// Validates, then durably appends. Returns the new offset (previous + 1).
  /// Throws SerializationFailure or StorageFull with the log unchanged.
  virtual std::uint64_t append(EventKind kind, const nlohmann::json& payload, Instant at) = 0;
  virtual std::uint64_t last_offset() const = 0;
};

class MemoryEventLog final : public EventLog {
public:
  std::uint64_t append(EventKind kind, const nlohmann::json& payload, Instant at) override;
  std::uint64_t last_offset() const override;
  std::vector<Event> events() const;

private:
  mutable std::mutex mu_;
  std::vector<Event> events_;
};

enum class Durability {
  /// write(2) completes before append returns; survives a process crash.
  Flush,
  /// additionally fdatasync(2) per record.
  Sync,
};

/// One record per line: "<crc32 hex8> <json>\n", after a header line.
/// Opening an existing file drops a torn final line so appends stay framed.
class FileEventLog final : public EventLog {
public:
  /// Throws Error(CorruptRecord) if a record before the final line is bad.
  FileEventLog(std::filesystem::path path, Durability durability);
  ~FileEventLog() override;
  FileEventLog(const FileEventLog&) = delete;
  FileEventLog& operator=(const FileEventLog&) = delete;

  std::uint64_t append(EventKind kind, const nlohmann::json& payload, Instant at) override;
  std::uint64_t last_offset() const override;

  /// Events recovered when the file was opened.
  const std::vector<Event>& recovered() const noexcept { return recovered_; }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }
  const std::filesystem::path& path() const noexcept { return path_; }

private:
  void write_all(std::string_view bytes);

  std::filesystem::path path_;
  Durability durability_;
  int fd_ = -1;
  mutable std::mutex mu_;
  std::uint64_t last_offset_ = 0;
  std::vector<Event> recovered_;
  std::vector<std::string> warnings_;
};

std::string encode_event_line(const Event& event);

struct LogReadResult {
  std::vector<Event> events;
  /// Set when a complete record failed its checksum or did not parse; the
  /// value is the offset that record should have carried.
  std::optional<std::uint64_t> corrupt_offset;
  /// The final line had no terminator (torn write) and was skipped.
  bool truncated_tail = false;
  /// Bytes covering the header and every accepted record.
  std::size_t valid_bytes = 0;
  std::vector<std::string> warnings;
};

/// Parses a whole log. Stops at the first corrupt record.
LogReadResult read_log(std::string_view contents);
LogReadResult read_log_file(const std::filesystem::path& path);

/// Folds events into a fresh state. Throws Error(CorruptRecord).
EngineState replay(std::span<const Event> events);

struct ReplayOutcome {
  EngineState state;
  std::optional<std::uint64_t> corrupt_offset;
  std::vector<std::string> warnings;
};

/// Replays every intact record; a corrupt record stops replay and is
/// surfaced instead of thrown.
ReplayOutcome replay_log(const LogReadResult& log);

/// "arssnap v1\n<crc32 hex8> <json>\n". The JSON carries the covered offset.
std::string snapshot(const EngineState& state);
EngineState decode_snapshot(std::string_view blob);
/// tail must start at snapshot offset + 1 and be gapless, else
/// Error(SnapshotOffsetMismatch).
EngineState load(std::string_view snapshot_blob, std::span<const Event> tail);

nlohmann::json state_to_json(const EngineState& state);
EngineState state_from_json(const nlohmann::json& j);

std::string read_file(const std::filesystem::path& path);
/// Writes to a sibling temp file then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

} // namespace ars
