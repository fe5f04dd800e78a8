#include "ars/clock.hpp"

#include "ars/error.hpp"

#include <charconv>
#include <cstdio>

namespace ars {

Instant SystemClock::now() const {
  return std::chrono::floor<Millis>(std::chrono::system_clock::now());
}

std::string format_iso(Instant t) {
  using namespace std::chrono;
  const auto day = floor<days>(t);
  const year_month_day ymd{day};
  const hh_mm_ss hms{t - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                int(hms.minutes().count()), int(hms.seconds().count()),
                int(hms.subseconds().count()));
  return buf;
}

namespace {

int take_digits(std::string_view text, std::size_t& pos, std::size_t n) {
  if (pos + n > text.size()) {
    throw Error(ErrorCode::BadRequest, "truncated timestamp");
  }
  int value = 0;
  const auto* first = text.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + n, value);
  if (ec != std::errc{} || ptr != first + n) {
    throw Error(ErrorCode::BadRequest, "bad digits in timestamp");
  }
  pos += n;
  return value;
}

void expect(std::string_view text, std::size_t& pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw Error(ErrorCode::BadRequest, "malformed timestamp: " + std::string(text));
  }
  ++pos;
}

} // namespace

Instant parse_iso(std::string_view text) {
  using namespace std::chrono;
  std::size_t pos = 0;
  const int y = take_digits(text, pos, 4);
  expect(text, pos, '-');
  const int mo = take_digits(text, pos, 2);
  expect(text, pos, '-');
  const int d = take_digits(text, pos, 2);
  expect(text, pos, 'T');
  const int h = take_digits(text, pos, 2);
  expect(text, pos, ':');
  const int mi = take_digits(text, pos, 2);
  expect(text, pos, ':');
  const int s = take_digits(text, pos, 2);
  int ms = 0;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    int scale = 100;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      ms += (text[pos] - '0') * scale;
      scale /= 10;
      ++pos;
    }
  }
  expect(text, pos, 'Z');
  if (pos != text.size()) {
    throw Error(ErrorCode::BadRequest, "trailing characters in timestamp");
  }
  const year_month_day ymd{year{y}, month{unsigned(mo)}, day{unsigned(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
    throw Error(ErrorCode::BadRequest, "timestamp out of range: " + std::string(text));
  }
  return Instant{sys_days{ymd}.time_since_epoch() + hours{h} + minutes{mi} + seconds{s} +
                 milliseconds{ms}};
}

} // namespace ars
