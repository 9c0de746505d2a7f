#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "hydrograph/timeutil.hpp"

namespace hydrograph {

struct AuthToken {
  std::string token;
  Timestamp expires;
};

std::string base64url_encode(std::string_view bytes);
// Throws Error(InvalidToken) on characters outside the URL-safe alphabet.
std::string base64url_decode(std::string_view text);

// HS256 JWTs for the single configured account.
class Authenticator {
 public:
  Authenticator(std::string username, std::string password, std::string secret,
                std::chrono::seconds ttl = std::chrono::hours(12));

  // Throws Error(InvalidCredentials).
  AuthToken authenticate(std::string_view username, std::string_view password,
                         Timestamp now = now_utc()) const;

  // Token for the account without a password check.
  AuthToken issue(Timestamp now = now_utc()) const;

  // Returns the subject. Throws Error(InvalidToken) for malformed, forged or
  // expired tokens.
  std::string verify(std::string_view token, Timestamp now = now_utc()) const;

 private:
  std::string sign(std::string_view data) const;

  std::string username_;
  std::string password_;
  std::string secret_;
  std::chrono::seconds ttl_;
};

}  // namespace hydrograph
