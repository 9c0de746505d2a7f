#include "hydrograph/auth.hpp"

#include <openssl/crypto.h>
#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <array>
#include <json.hpp>

#include "hydrograph/error.hpp"

namespace hydrograph {

namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789-_";

bool constant_time_equal(std::string_view a, std::string_view b) {
  return a.size() == b.size() && CRYPTO_memcmp(a.data(), b.data(), a.size()) == 0;
}

[[noreturn]] void reject(const std::string& why) { throw Error(ErrorCode::InvalidToken, why); }

}  // namespace

std::string base64url_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::uint32_t acc = 0;
  int bits = 0;
  for (unsigned char c : bytes) {
    acc = (acc << 8) | c;
    bits += 8;
    while (bits >= 6) {
      bits -= 6;
      out.push_back(kAlphabet[(acc >> bits) & 0x3f]);
    }
  }
  if (bits > 0) out.push_back(kAlphabet[(acc << (6 - bits)) & 0x3f]);
  return out;
}

std::string base64url_decode(std::string_view text) {
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (std::size_t i = 0; i < kAlphabet.size(); ++i) {
    lookup[static_cast<unsigned char>(kAlphabet[i])] = static_cast<int>(i);
  }
  std::string out;
  std::uint32_t acc = 0;
  int bits = 0;
  for (unsigned char c : text) {
    const int v = lookup[c];
    if (v < 0) reject("bad base64url character");
    acc = (acc << 6) | static_cast<std::uint32_t>(v);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<char>((acc >> bits) & 0xff));
    }
  }
  if (bits >= 6) reject("truncated base64url");
  return out;
}

Authenticator::Authenticator(std::string username, std::string password, std::string secret,
                             std::chrono::seconds ttl)
    : username_(std::move(username)),
      password_(std::move(password)),
      secret_(std::move(secret)),
      ttl_(ttl) {
  if (secret_.empty()) throw Error(ErrorCode::InvalidArgument, "token secret must not be empty");
}

std::string Authenticator::sign(std::string_view data) const {
  unsigned char mac[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  HMAC(EVP_sha256(), secret_.data(), static_cast<int>(secret_.size()),
       reinterpret_cast<const unsigned char*>(data.data()), data.size(), mac, &len);
  return std::string(reinterpret_cast<const char*>(mac), len);
}

AuthToken Authenticator::authenticate(std::string_view username, std::string_view password,
                                      Timestamp now) const {
  // Evaluate both comparisons so timing does not reveal which one failed.
  const bool user_ok = constant_time_equal(username, username_);
  const bool pass_ok = constant_time_equal(password, password_);
  if (username_.empty() || !user_ok || !pass_ok) {
    throw Error(ErrorCode::InvalidCredentials, "invalid username or password");
  }
  return issue(now);
}

AuthToken Authenticator::issue(Timestamp now) const {
  const Timestamp exp{now.time + ttl_};
  const nlohmann::json header = {{"alg", "HS256"}, {"typ", "JWT"}};
  const nlohmann::json claims = {{"sub", username_}, {"iat", now.epoch()}, {"exp", exp.epoch()}};
  const std::string signing_input =
      base64url_encode(header.dump()) + "." + base64url_encode(claims.dump());
  return {signing_input + "." + base64url_encode(sign(signing_input)), exp};
}

std::string Authenticator::verify(std::string_view token, Timestamp now) const {
  const auto d1 = token.find('.');
  const auto d2 = d1 == std::string_view::npos ? d1 : token.find('.', d1 + 1);
  if (d2 == std::string_view::npos || token.find('.', d2 + 1) != std::string_view::npos) {
    reject("malformed token");
  }
  const std::string_view signing_input = token.substr(0, d2);
  const std::string signature = base64url_decode(token.substr(d2 + 1));
  if (!constant_time_equal(signature, sign(signing_input))) reject("bad token signature");

  nlohmann::json header, claims;
  try {
    header = nlohmann::json::parse(base64url_decode(token.substr(0, d1)));
    claims = nlohmann::json::parse(base64url_decode(token.substr(d1 + 1, d2 - d1 - 1)));
  } catch (const nlohmann::json::exception&) {
    reject("malformed token");
  }
  if (!header.is_object() || header.value("alg", "") != "HS256") reject("unsupported token algorithm");
  if (!claims.is_object() || !claims.contains("exp") || !claims["exp"].is_number_integer() ||
      !claims.contains("sub") || !claims["sub"].is_string()) {
    reject("malformed token claims");
  }
  if (claims["exp"].get<std::int64_t>() <= now.epoch()) reject("token expired");
  return claims["sub"].get<std::string>();
}

}  // namespace hydrograph
