#include "ars/http/auth.hpp"

#include "ars/error.hpp"

#include <sodium.h>

#include <stdexcept>

namespace ars::http {
namespace {

void ensure_sodium() {
  static const bool ready = [] { return sodium_init() >= 0; }();
  if (!ready) {
    throw std::runtime_error("libsodium initialisation failed");
  }
}

// Verified against when no credential is configured so the failure path
// costs the same as a real check.
const std::string& decoy_hash() {
  static const std::string hash = hash_password("decoy", HashStrength::Minimal);
  return hash;
}

} // namespace

std::string hash_password(std::string_view password, HashStrength strength) {
  ensure_sodium();
  const auto ops = strength == HashStrength::Minimal ? crypto_pwhash_OPSLIMIT_MIN
                                                     : crypto_pwhash_OPSLIMIT_INTERACTIVE;
  const auto mem = strength == HashStrength::Minimal ? crypto_pwhash_MEMLIMIT_MIN
                                                     : crypto_pwhash_MEMLIMIT_INTERACTIVE;
  char out[crypto_pwhash_STRBYTES];
  if (crypto_pwhash_str(out, password.data(), password.size(), ops, mem) != 0) {
    throw std::runtime_error("password hashing ran out of memory");
  }
  return out;
}

std::string random_token() {
  ensure_sodium();
  unsigned char raw[16];
  randombytes_buf(raw, sizeof raw);
  char out[sodium_base64_ENCODED_LEN(16, sodium_base64_VARIANT_URLSAFE_NO_PADDING)];
  sodium_bin2base64(out, sizeof out, raw, sizeof raw, sodium_base64_VARIANT_URLSAFE_NO_PADDING);
  return out;
}

bool secure_equals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) {
    return false;
  }
  return a.empty() || sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

TeacherAuth::TeacherAuth(std::string password_hash, std::chrono::minutes session_ttl,
                         const Clock& clock)
    : password_hash_(std::move(password_hash)), ttl_(session_ttl), clock_(clock) {
  ensure_sodium();
}

TeacherSession TeacherAuth::login(std::string_view password) {
  const bool configured = !password_hash_.empty();
  const auto& hash = configured ? password_hash_ : decoy_hash();
  const bool match =
      crypto_pwhash_str_verify(hash.c_str(), password.data(), password.size()) == 0;
  if (!match || !configured) {
    throw Error(ErrorCode::BadCredential, "invalid credentials");
  }
  TeacherSession session{random_token(), clock_.now() + ttl_};
  std::lock_guard lock(mu_);
  sessions_[session.token] = session.expires_at;
  return session;
}

bool TeacherAuth::is_valid(std::string_view session_token) {
  std::lock_guard lock(mu_);
  const auto it = sessions_.find(std::string(session_token));
  if (it == sessions_.end()) {
    return false;
  }
  if (clock_.now() >= it->second) {
    sessions_.erase(it);
    return false;
  }
  return true;
}

void TeacherAuth::logout(std::string_view session_token) {
  std::lock_guard lock(mu_);
  sessions_.erase(std::string(session_token));
}

ParticipantRegistry::ParticipantRegistry(const Clock& clock, int submit_cap)
    : clock_(clock), submit_cap_(submit_cap) {}

ParticipantToken ParticipantRegistry::issue(std::optional<WindowId> window_id) {
  ParticipantToken t{random_token(), clock_.now(), std::move(window_id)};
  std::lock_guard lock(mu_);
  tokens_.emplace(t.token, Entry{t, 0});
  return t;
}

std::optional<ParticipantToken> ParticipantRegistry::find(std::string_view token) const {
  std::lock_guard lock(mu_);
  const auto it = tokens_.find(std::string(token));
  if (it == tokens_.end()) {
    return std::nullopt;
  }
  return it->second.token;
}

bool ParticipantRegistry::consume_submit(std::string_view token) {
  std::lock_guard lock(mu_);
  const auto it = tokens_.find(std::string(token));
  if (it == tokens_.end() || it->second.submits >= submit_cap_) {
    return false;
  }
  ++it->second.submits;
  return true;
}

std::size_t ParticipantRegistry::size() const {
  std::lock_guard lock(mu_);
  return tokens_.size();
}

} // namespace ars::http
