#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace hydrograph {

// UTC instant at one-second resolution.
struct Timestamp {
  std::chrono::sys_seconds time{};

  static Timestamp from_epoch(std::int64_t seconds) {
    return Timestamp{std::chrono::sys_seconds{std::chrono::seconds{seconds}}};
  }
  std::int64_t epoch() const { return time.time_since_epoch().count(); }

  friend auto operator<=>(const Timestamp&, const Timestamp&) = default;
};

// ISO-8601 subset: `YYYY-MM-DD`, optionally followed by `T` or a space and
// `HH:MM[:SS]`, optionally followed by `Z` or a `+HH:MM`/`-HH:MM` offset.
// Throws Error(InvalidArgument) on anything else.
Timestamp parse_timestamp(std::string_view text);

// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_timestamp(Timestamp ts);

Timestamp now_utc();

}  // namespace hydrograph
