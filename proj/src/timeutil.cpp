#include "hydrograph/timeutil.hpp"

#include <charconv>
#include <cstdio>

#include "hydrograph/error.hpp"

namespace hydrograph {

namespace {

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorCode::InvalidArgument, "invalid timestamp '" + std::string(text) + "'");
}

int digits(std::string_view text, std::size_t pos, std::size_t count, std::string_view whole) {
  if (pos + count > text.size()) bad(whole);
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    if (text[i] < '0' || text[i] > '9') bad(whole);
    value = value * 10 + (text[i] - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
  if (pos >= text.size() || text[pos] != c) bad(whole);
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  const std::string_view whole = text;
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);

  const int y = digits(text, 0, 4, whole);
  expect(text, 4, '-', whole);
  const int mo = digits(text, 5, 2, whole);
  expect(text, 7, '-', whole);
  const int d = digits(text, 8, 2, whole);
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) bad(whole);

  int hh = 0, mm = 0, ss = 0, offset_minutes = 0;
  std::size_t pos = 10;
  if (pos < text.size()) {
    if (text[pos] != 'T' && text[pos] != ' ') bad(whole);
    hh = digits(text, pos + 1, 2, whole);
    expect(text, pos + 3, ':', whole);
    mm = digits(text, pos + 4, 2, whole);
    pos += 6;
    if (pos < text.size() && text[pos] == ':') {
      ss = digits(text, pos + 1, 2, whole);
      pos += 3;
    }
    if (pos < text.size()) {
      if (text[pos] == 'Z' && pos + 1 == text.size()) {
        pos += 1;
      } else if ((text[pos] == '+' || text[pos] == '-') && pos + 6 == text.size()) {
        const int oh = digits(text, pos + 1, 2, whole);
        expect(text, pos + 3, ':', whole);
        const int om = digits(text, pos + 4, 2, whole);
        offset_minutes = (text[pos] == '+' ? 1 : -1) * (oh * 60 + om);
        pos += 6;
      } else {
        bad(whole);
      }
    }
    if (hh > 23 || mm > 59 || ss > 59) bad(whole);
  }

  const sys_seconds t = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} -
                        minutes{offset_minutes};
  return Timestamp{t};
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const sys_days day_part = floor<days>(ts.time);
  const year_month_day ymd{day_part};
  const hh_mm_ss tod{ts.time - day_part};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(tod.hours().count()), static_cast<int>(tod.minutes().count()),
                static_cast<int>(tod.seconds().count()));
  return buf;
}

Timestamp now_utc() {
  return Timestamp{std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now())};
}

}  // namespace hydrograph
