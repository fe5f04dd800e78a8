#include "oracle.hpp"

#include <set>

namespace ars::testing {

std::map<std::string, OracleQuestion> recount(std::span<const Event> events,
                                              const OracleOptions& options) {
  std::set<std::string> closed;
  std::map<std::string, std::string> window_group;
  for (const auto& e : events) {
    if (e.kind == EventKind::WindowOpened) {
      window_group[e.payload["window_id"].get<std::string>()] = e.payload["group_id"].get<std::string>();
    } else if (e.kind == EventKind::WindowClosed) {
      closed.insert(e.payload["window_id"].get<std::string>());
    }
  }

  // (window, participant, question) -> options of the latest record
  std::map<std::tuple<std::string, std::string, std::string>, const nlohmann::json*> finals;
  for (const auto& e : events) {
    if (e.kind != EventKind::ResponseRecorded) {
      continue;
    }
    const auto& p = e.payload;
    finals[{p["window_id"].get<std::string>(), p["participant"].get<std::string>(),
            p["question_id"].get<std::string>()}] = &p;
  }

  std::map<std::string, OracleQuestion> out;
  for (const auto& [key, p] : finals) {
    const auto& window = std::get<0>(key);
    if (options.window_id && *options.window_id != window) continue;
    if (options.group_id && *options.group_id != window_group[window]) continue;
    if (!options.include_live && !closed.contains(window)) continue;
    if (options.range) {
      const auto at = parse_iso((*p)["received_at"].get<std::string>()).time_since_epoch().count();
      if (at < options.range->first || at >= options.range->second) continue;
    }
    auto& q = out[std::get<2>(key)];
    ++q.respondents;
    for (const auto& o : (*p)["options"]) {
      ++q.counts[o.get<std::string>()];
    }
  }
  return out;
}

std::string decimal6(std::int64_t n, std::int64_t d) {
  // Seven digits by long division, then look at the remainder for ties.
  std::int64_t whole = n / d;
  std::int64_t rem = n % d;
  std::string digits;
  for (int i = 0; i < 6; ++i) {
    rem *= 10;
    digits += static_cast<char>('0' + rem / d);
    rem %= d;
  }
  // Compare the remainder with half a unit in the last place.
  const bool above = 2 * rem > d;
  const bool tie = 2 * rem == d;
  const bool odd = (digits.back() - '0') % 2 == 1;
  if (above || (tie && odd)) {
    int i = 5;
    while (i >= 0 && digits[static_cast<std::size_t>(i)] == '9') {
      digits[static_cast<std::size_t>(i)] = '0';
      --i;
    }
    if (i < 0) {
      ++whole;
    } else {
      ++digits[static_cast<std::size_t>(i)];
    }
  }
  return std::to_string(whole) + "." + digits;
}

std::int64_t rounded_length(std::int64_t n, std::int64_t d, std::int64_t w) {
  // Smallest k with n*w/d < k + 1/2, found by counting up.
  std::int64_t k = 0;
  while ((2 * k + 1) * d <= 2 * n * w) {
    ++k;
  }
  return k;
}

} // namespace ars::testing
