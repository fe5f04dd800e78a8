#pragma once

#include "ars/engine.hpp"

#include "json.hpp"

#include <atomic>
#include <chrono>
#include <optional>

namespace ars::http {

struct StreamFrame {
  std::uint64_t version = 0;
  /// Set on the snapshot taken after the window closed; nothing follows it.
  bool final = false;
  TabulatedStats stats;

  nlohmann::json to_json(std::int64_t bar_width) const;
  /// "event: stats\ndata: <json>\n\n"
  std::string to_sse(std::int64_t bar_width) const;
};

/// Pull-based live statistics for one window: an initial snapshot, then a
/// fresh one at most every refresh interval while counts change, then a final
/// snapshot once the window closes.
class LiveStatsStream {
public:
  LiveStatsStream(Engine& engine, WindowId window_id, Millis refresh_interval,
                  Millis poll_timeout = Millis{250});

  /// Blocks until the next frame is due. nullopt after the final frame or
  /// after cancel(). Throws UnknownWindow.
  std::optional<StreamFrame> next();
  void cancel() noexcept { cancelled_ = true; }

private:
  StreamFrame capture();

  Engine& engine_;
  WindowId window_id_;
  Millis refresh_;
  Millis poll_timeout_;
  bool started_ = false;
  bool done_ = false;
  std::uint64_t last_version_ = 0;
  std::chrono::steady_clock::time_point last_emit_;
  std::atomic<bool> cancelled_{false};
};

} // namespace ars::http
