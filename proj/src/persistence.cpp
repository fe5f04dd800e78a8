#include "ars/persistence.hpp"

#include "ars/codec.hpp"

#include <zlib.h>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fcntl.h>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace ars {
namespace {

std::uint32_t checksum(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(bytes.data()), static_cast<uInt>(bytes.size())));
}

std::string hex8(std::uint32_t v) {
  char buf[9];
  std::snprintf(buf, sizeof buf, "%08x", v);
  return buf;
}

/// "<crc> <json>" without the terminator. Returns the JSON body or nullopt.
std::optional<std::string_view> checked_body(std::string_view line) {
  if (line.size() < 10 || line[8] != ' ') {
    return std::nullopt;
  }
  std::uint32_t expected = 0;
  for (char c : line.substr(0, 8)) {
    expected <<= 4;
    if (c >= '0' && c <= '9') {
      expected |= static_cast<std::uint32_t>(c - '0');
    } else if (c >= 'a' && c <= 'f') {
      expected |= static_cast<std::uint32_t>(c - 'a' + 10);
    } else {
      return std::nullopt;
    }
  }
  const auto body = line.substr(9);
  if (checksum(body) != expected) {
    return std::nullopt;
  }
  return body;
}

std::string checked_line(const std::string& body) {
  return hex8(checksum(body)) + " " + body + "\n";
}

nlohmann::json event_json(const Event& e) {
  return nlohmann::json{{"offset", e.offset},
                        {"at", format_iso(e.recorded_at)},
                        {"kind", to_string(e.kind)},
                        {"payload", e.payload}};
}

std::optional<Event> parse_event(std::string_view body) {
  try {
    const auto j = nlohmann::json::parse(body);
    const auto kind = parse_event_kind(j.at("kind").get<std::string>());
    if (!kind) {
      return std::nullopt;
    }
    Event e;
    e.offset = j.at("offset").get<std::uint64_t>();
    e.recorded_at = parse_iso(j.at("at").get<std::string>());
    e.kind = *kind;
    e.payload = j.at("payload");
    return e;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

} // namespace

std::string encode_event_line(const Event& event) { return checked_line(event_json(event).dump()); }

// ---------------------------------------------------------------- memory log

std::uint64_t MemoryEventLog::append(EventKind kind, const nlohmann::json& payload, Instant at) {
  validate_payload(kind, payload);
  std::lock_guard lock(mu_);
  Event e{events_.size() + 1, at, kind, payload};
  events_.push_back(std::move(e));
  return events_.size();
}

std::uint64_t MemoryEventLog::last_offset() const {
  std::lock_guard lock(mu_);
  return events_.size();
}

std::vector<Event> MemoryEventLog::events() const {
  std::lock_guard lock(mu_);
  return events_;
}

// ------------------------------------------------------------------ file log

LogReadResult read_log(std::string_view contents) {
  LogReadResult out;
  if (contents.empty()) {
    return out;
  }
  const std::string header = std::string(kLogHeader) + "\n";
  if (contents.size() < header.size()) {
    if (header.starts_with(contents)) {
      out.truncated_tail = true;
      out.warnings.push_back("log truncated inside its header");
    } else {
      out.corrupt_offset = 1;
    }
    return out;
  }
  if (!contents.starts_with(header)) {
    out.corrupt_offset = 1;
    out.warnings.push_back("missing 'arslog v1' header");
    return out;
  }
  std::size_t pos = header.size();
  out.valid_bytes = pos;
  std::uint64_t expected = 1;
  while (pos < contents.size()) {
    const auto nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) {
      out.truncated_tail = true;
      out.warnings.push_back("skipped torn final record after offset " +
                             std::to_string(expected - 1));
      break;
    }
    const auto line = contents.substr(pos, nl - pos);
    const auto body = checked_body(line);
    auto event = body ? parse_event(*body) : std::nullopt;
    if (!event || event->offset != expected) {
      out.corrupt_offset = expected;
      out.warnings.push_back("corrupt record at offset " + std::to_string(expected));
      break;
    }
    out.events.push_back(std::move(*event));
    ++expected;
    pos = nl + 1;
    out.valid_bytes = pos;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::NotFound, "cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

LogReadResult read_log_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    return {};
  }
  return read_log(read_file(path));
}

void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
  const auto tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) {
    throw Error(ErrorCode::StorageFull, "cannot create " + tmp + ": " + std::strerror(errno));
  }
  std::size_t done = 0;
  while (done < bytes.size()) {
    const auto n = ::write(fd, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      ::close(fd);
      throw Error(ErrorCode::StorageFull, "write " + tmp + ": " + std::strerror(err));
    }
    done += static_cast<std::size_t>(n);
  }
  ::fsync(fd);
  ::close(fd);
  std::filesystem::rename(tmp, path);
}

FileEventLog::FileEventLog(std::filesystem::path path, Durability durability)
    : path_(std::move(path)), durability_(durability) {
  auto existing = read_log_file(path_);
  if (existing.corrupt_offset) {
    throw Error(ErrorCode::CorruptRecord, path_.string() + ": corrupt record at offset " +
                                              std::to_string(*existing.corrupt_offset));
  }
  fd_ = ::open(path_.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd_ < 0) {
    throw Error(ErrorCode::StorageFull, "cannot open " + path_.string() + ": " + std::strerror(errno));
  }
  if (existing.truncated_tail || existing.valid_bytes == 0) {
    if (::ftruncate(fd_, static_cast<off_t>(existing.valid_bytes)) != 0) {
      throw Error(ErrorCode::StorageFull, "cannot truncate " + path_.string());
    }
  }
  if (existing.valid_bytes == 0) {
    write_all(std::string(kLogHeader) + "\n");
  }
  warnings_ = std::move(existing.warnings);
  recovered_ = std::move(existing.events);
  last_offset_ = recovered_.empty() ? 0 : recovered_.back().offset;
}

FileEventLog::~FileEventLog() {
  if (fd_ >= 0) {
    ::close(fd_);
  }
}

void FileEventLog::write_all(std::string_view bytes) {
  const off_t before = ::lseek(fd_, 0, SEEK_END);
  std::size_t done = 0;
  while (done < bytes.size()) {
    const auto n = ::write(fd_, bytes.data() + done, bytes.size() - done);
    if (n < 0) {
      if (errno == EINTR) continue;
      const int err = errno;
      // Roll back a partial record so the log stays framed.
      if (before >= 0) {
        [[maybe_unused]] int rc = ::ftruncate(fd_, before);
      }
      throw Error(ErrorCode::StorageFull, path_.string() + ": " + std::strerror(err));
    }
    done += static_cast<std::size_t>(n);
  }
  if (durability_ == Durability::Sync && ::fdatasync(fd_) != 0) {
    throw Error(ErrorCode::StorageFull, path_.string() + ": fdatasync failed");
  }
}

std::uint64_t FileEventLog::append(EventKind kind, const nlohmann::json& payload, Instant at) {
  validate_payload(kind, payload);
  std::lock_guard lock(mu_);
  Event e{last_offset_ + 1, at, kind, payload};
  std::string line;
  try {
    line = encode_event_line(e);
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorCode::SerializationFailure, ex.what());
  }
  write_all(line);
  return ++last_offset_;
}

std::uint64_t FileEventLog::last_offset() const {
  std::lock_guard lock(mu_);
  return last_offset_;
}

// -------------------------------------------------------------------- replay

EngineState replay(std::span<const Event> events) {
  EngineState state;
  for (const auto& e : events) {
    apply_event(state, e);
  }
  return state;
}

ReplayOutcome replay_log(const LogReadResult& log) {
  ReplayOutcome out;
  out.warnings = log.warnings;
  out.corrupt_offset = log.corrupt_offset;
  for (const auto& e : log.events) {
    try {
      apply_event(out.state, e);
    } catch (const Error& err) {
      out.corrupt_offset = e.offset;
      out.warnings.push_back(err.what());
      break;
    }
  }
  return out;
}

// ----------------------------------------------------------------- snapshots

nlohmann::json state_to_json(const EngineState& state) {
  using nlohmann::json;
  json questions = json::array();
  for (const auto* latest : state.pool.latest_all()) {
    questions.push_back(state.pool.history(latest->question_id));
  }
  json groups = json::array();
  json windows = json::array();
  for (const auto* g : state.groups.all()) {
    groups.push_back(*g);
    for (const auto& wid : state.sessions.windows_of(g->group_id)) {
      const auto& rec = state.sessions.get(wid);
      json finals = json::array();
      for (const auto& [key, r] : rec.responses.finals) {
        finals.push_back(r);
      }
      json receipts = json::object();
      for (const auto& [slot, receipt] : rec.responses.receipts_by_key) {
        receipts[slot] = receipt;
      }
      json w{{"window", rec.window},
             {"finals", std::move(finals)},
             {"receipts_by_key", std::move(receipts)},
             {"last_received_at", format_iso(rec.responses.last_received_at)},
             {"accepted", rec.responses.accepted},
             {"version", rec.responses.version}};
      w["summary"] = rec.summary ? json(*rec.summary) : json(nullptr);
      windows.push_back(std::move(w));
    }
  }
  return json{{"offset", state.offset},
              {"questions", std::move(questions)},
              {"groups", std::move(groups)},
              {"windows", std::move(windows)}};
}

EngineState state_from_json(const nlohmann::json& j) {
  EngineState state;
  state.offset = j.at("offset").get<std::uint64_t>();
  for (const auto& revisions : j.at("questions")) {
    for (const auto& rev : revisions) {
      state.pool.commit(rev.get<QuestionRevision>());
    }
  }
  for (const auto& g : j.at("groups")) {
    state.groups.commit(g.get<QuestionGroup>());
  }
  for (const auto& w : j.at("windows")) {
    WindowRecord rec;
    rec.window = w.at("window").get<AnsweringWindow>();
    for (const auto& f : w.at("finals")) {
      auto r = f.get<ResponseRecord>();
      FinalKey key{r.participant, r.question_id};
      ++rec.responses.answers_per_participant[r.participant];
      rec.responses.finals.emplace(std::move(key), std::move(r));
    }
    for (const auto& [slot, receipt] : w.at("receipts_by_key").items()) {
      rec.responses.receipts_by_key.emplace(slot, receipt.get<SubmissionReceipt>());
    }
    rec.responses.last_received_at = parse_iso(w.at("last_received_at").get<std::string>());
    rec.responses.accepted = w.at("accepted").get<std::int64_t>();
    rec.responses.version = w.at("version").get<std::uint64_t>();
    if (!w.at("summary").is_null()) {
      rec.summary = w.at("summary").get<WindowSummary>();
    }
    state.sessions.restore(std::move(rec));
  }
  return state;
}

std::string snapshot(const EngineState& state) {
  return std::string(kSnapshotHeader) + "\n" + checked_line(state_to_json(state).dump());
}

EngineState decode_snapshot(std::string_view blob) {
  const std::string header = std::string(kSnapshotHeader) + "\n";
  if (!blob.starts_with(header)) {
    throw Error(ErrorCode::CorruptRecord, "snapshot lacks 'arssnap v1' header");
  }
  auto rest = blob.substr(header.size());
  if (rest.empty() || rest.back() != '\n') {
    throw Error(ErrorCode::CorruptRecord, "snapshot is truncated");
  }
  rest.remove_suffix(1);
  const auto body = checked_body(rest);
  if (!body) {
    throw Error(ErrorCode::CorruptRecord, "snapshot checksum mismatch");
  }
  try {
    return state_from_json(nlohmann::json::parse(*body));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::CorruptRecord, std::string("snapshot: ") + e.what());
  }
}

EngineState load(std::string_view snapshot_blob, std::span<const Event> tail) {
  auto state = decode_snapshot(snapshot_blob);
  std::uint64_t expected = state.offset + 1;
  for (const auto& e : tail) {
    if (e.offset != expected) {
      throw Error(ErrorCode::SnapshotOffsetMismatch,
                  "snapshot covers offset " + std::to_string(state.offset) + ", tail record " +
                      std::to_string(e.offset) + " where " + std::to_string(expected) +
                      " was expected");
    }
    ++expected;
  }
  for (const auto& e : tail) {
    apply_event(state, e);
  }
  return state;
}

} // namespace ars
