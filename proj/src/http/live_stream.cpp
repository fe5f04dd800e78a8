#include "ars/http/live_stream.hpp"

#include "ars/codec.hpp"

#include <thread>

namespace ars::http {

nlohmann::json StreamFrame::to_json(std::int64_t bar_width) const {
  return {{"version", version},
          {"final", final},
          {"stats", stats},
          {"bars", bar_layout(stats, bar_width)}};
}

std::string StreamFrame::to_sse(std::int64_t bar_width) const {
  return "event: stats\ndata: " + to_json(bar_width).dump() + "\n\n";
}

LiveStatsStream::LiveStatsStream(Engine& engine, WindowId window_id, Millis refresh_interval,
                                 Millis poll_timeout)
    : engine_(engine),
      window_id_(std::move(window_id)),
      refresh_(refresh_interval),
      poll_timeout_(poll_timeout) {}

StreamFrame LiveStatsStream::capture() {
  engine_.sweep_expired();
  // Version is read before tabulating: if a response lands in between, the
  // frame undercounts its version and the next poll emits again.
  const auto view = engine_.window_view(window_id_);
  StreamFrame frame;
  frame.version = view.version;
  frame.final = view.window.state == WindowState::Closed;
  StatsFilter filter;
  filter.window_id = window_id_;
  filter.include_live = true;
  frame.stats = engine_.tabulate(filter);
  last_version_ = frame.version;
  last_emit_ = std::chrono::steady_clock::now();
  done_ = frame.final;
  return frame;
}

std::optional<StreamFrame> LiveStatsStream::next() {
  if (done_ || cancelled_) {
    return std::nullopt;
  }
  if (!started_) {
    started_ = true;
    return capture();
  }
  while (!cancelled_) {
    const auto since = std::chrono::steady_clock::now() - last_emit_;
    if (since < refresh_) {
      std::this_thread::sleep_for(refresh_ - since);
    }
    engine_.wait_for_change(window_id_, last_version_, poll_timeout_);
    engine_.sweep_expired();
    const auto view = engine_.window_view(window_id_);
    if (view.version != last_version_ || view.window.state == WindowState::Closed) {
      return capture();
    }
  }
  return std::nullopt;
}

} // namespace ars::http
