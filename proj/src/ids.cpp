#include "ars/ids.hpp"

#include "ars/clock.hpp"

#include <sodium.h>

#include <cstdio>
#include <stdexcept>

namespace ars {
namespace {

constexpr std::string_view kCrockford = "0123456789ABCDEFGHJKMNPQRSTVWXYZ";

void ensure_sodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) {
    throw std::runtime_error("libsodium initialisation failed");
  }
}

} // namespace

UlidSource::UlidSource(const Clock& clock) : clock_(clock), rng_(std::random_device{}()) {}

std::string UlidSource::next_id() {
  std::lock_guard lock(mu_);
  const std::int64_t ms = clock_.now().time_since_epoch().count();
  if (ms <= last_ms_) {
    // Same (or regressed) millisecond: keep ordering by incrementing.
    if (++rand_lo_ == 0) {
      rand_hi_ = (rand_hi_ + 1) & 0xFFFF;
    }
  } else {
    last_ms_ = ms;
    rand_hi_ = rng_() & 0xFFFF;
    rand_lo_ = rng_();
  }
  const auto time_bits = static_cast<std::uint64_t>(last_ms_) & 0xFFFF'FFFF'FFFFull;

  std::string out(26, '0');
  // 10 chars of time (50 bits, top two zero).
  for (int i = 9; i >= 0; --i) {
    out[i] = kCrockford[(time_bits >> (5 * (9 - i))) & 31];
  }
  // 16 chars of randomness (80 bits): hi 16 bits then lo 64 bits.
  unsigned __int128 r = (static_cast<unsigned __int128>(rand_hi_) << 64) | rand_lo_;
  for (int i = 25; i >= 10; --i) {
    out[i] = kCrockford[static_cast<unsigned>(r & 31)];
    r >>= 5;
  }
  return out;
}

std::string UlidSource::join_code() {
  ensure_sodium();
  std::string code(6, ' ');
  for (auto& c : code) {
    c = kJoinCodeAlphabet[randombytes_uniform(static_cast<std::uint32_t>(kJoinCodeAlphabet.size()))];
  }
  return code;
}

std::string SequentialIds::next_id() {
  std::lock_guard lock(mu_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%08llu", static_cast<unsigned long long>(next_++));
  return prefix_ + buf;
}

std::string SequentialIds::join_code() {
  std::lock_guard lock(mu_);
  auto n = next_code_++;
  std::string code(6, kJoinCodeAlphabet[0]);
  for (int i = 5; i >= 0 && n > 0; --i) {
    code[i] = kJoinCodeAlphabet[n % kJoinCodeAlphabet.size()];
    n /= kJoinCodeAlphabet.size();
  }
  return code;
}

} // namespace ars
