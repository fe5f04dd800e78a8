#pragma once

#include "ars/clock.hpp"
#include "ars/error.hpp"
#include "ars/ids.hpp"

#include <chrono>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

namespace ars::http {

enum class HashStrength {
  /// libsodium's interactive Argon2id limits; use for real credentials.
  Interactive,
  /// Smallest permitted limits; tests and throwaway loopback servers only.
  Minimal,
};

/// Encoded Argon2id string (salt and parameters embedded).
std::string hash_password(std::string_view password, HashStrength strength = HashStrength::Interactive);

/// 128 random bits, URL-safe base64 without padding (22 characters).
std::string random_token();

struct TeacherSession {
  std::string token;
  Instant expires_at;
};

/// Single shared teacher credential. Plaintext is never stored.
class TeacherAuth {
public:
  TeacherAuth(std::string password_hash, std::chrono::minutes session_ttl, const Clock& clock);

  /// Throws Error(BadCredential). Runs a full hash verification on every
  /// path so failures look alike.
  TeacherSession login(std::string_view password);
  bool is_valid(std::string_view session_token);
  void logout(std::string_view session_token);

private:
  std::string password_hash_;
  std::chrono::minutes ttl_;
  const Clock& clock_;
  std::mutex mu_;
  std::unordered_map<std::string, Instant> sessions_;
};

struct ParticipantToken {
  std::string token;
  Instant issued_at;
  std::optional<WindowId> window_id;
};

/// Anonymous participant tokens with a fixed per-token submit cap.
class ParticipantRegistry {
public:
  ParticipantRegistry(const Clock& clock, int submit_cap);

  ParticipantToken issue(std::optional<WindowId> window_id);
  std::optional<ParticipantToken> find(std::string_view token) const;
  /// Counts one submission; false once the cap is exhausted.
  bool consume_submit(std::string_view token);
  std::size_t size() const;

private:
  struct Entry {
    ParticipantToken token;
    int submits = 0;
  };

  const Clock& clock_;
  int submit_cap_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, Entry> tokens_;
};

/// Constant-time equality for secrets of equal length.
bool secure_equals(std::string_view a, std::string_view b);

} // namespace ars::http
