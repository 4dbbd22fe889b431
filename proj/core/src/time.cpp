#include "wikimento/time.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

#include "wikimento/errors.hpp"

namespace wikimento {

namespace {

constexpr std::int64_t kSecondsPerDay = 86400;

constexpr std::array<const char*, 7> kWeekdayNames = {
    "Sun", "Mon", "Tue", "Wed", "Thu", "Fri", "Sat"};

constexpr std::array<const char*, 12> kMonthNames = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun",
    "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

bool is_leap(int y) {
  return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0);
}

int days_in_month(int y, int m) {
  static constexpr int lengths[] = {31, 28, 31, 30, 31, 30,
                                    31, 31, 30, 31, 30, 31};
  if (m == 2 && is_leap(y)) return 29;
  return lengths[m - 1];
}

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm,
// proleptic Gregorian, exact for any year).
std::int64_t days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
  m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
  y = static_cast<int>(yy + (m <= 2));
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool valid_civil(const CivilTime& ct) {
  return ct.month >= 1 && ct.month <= 12 && ct.day >= 1 &&
         ct.day <= days_in_month(ct.year, ct.month) && ct.hour >= 0 &&
         ct.hour <= 23 && ct.minute >= 0 && ct.minute <= 59 &&
         ct.second >= 0 && ct.second <= 59;
}

// Parses exactly `n` ASCII digits starting at `pos`; advances pos.
bool take_digits(std::string_view s, std::size_t& pos, int n, int& out) {
  if (pos + n > s.size()) return false;
  int v = 0;
  for (int i = 0; i < n; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  pos += n;
  out = v;
  return true;
}

bool take_literal(std::string_view s, std::size_t& pos, std::string_view lit) {
  if (s.substr(pos, lit.size()) != lit) return false;
  pos += lit.size();
  return true;
}

int match_name(std::string_view tok, const char* const* names, int count) {
  for (int i = 0; i < count; ++i) {
    if (tok == names[i]) return i;
  }
  return -1;
}

}  // namespace

EpochSecond civil_to_epoch(const CivilTime& ct) {
  return days_from_civil(ct.year, ct.month, ct.day) * kSecondsPerDay +
         ct.hour * 3600 + ct.minute * 60 + ct.second;
}

CivilTime epoch_to_civil(EpochSecond t) {
  const std::int64_t days = floor_div(t, kSecondsPerDay);
  std::int64_t rem = t - days * kSecondsPerDay;
  CivilTime ct;
  civil_from_days(days, ct.year, ct.month, ct.day);
  ct.hour = static_cast<int>(rem / 3600);
  rem %= 3600;
  ct.minute = static_cast<int>(rem / 60);
  ct.second = static_cast<int>(rem % 60);
  return ct;
}

int day_of_week(EpochSecond t) {
  // 1970-01-01 was a Thursday.
  const std::int64_t days = floor_div(t, kSecondsPerDay);
  return static_cast<int>(((days % 7) + 7 + 4) % 7);
}

EpochSecond parse_http_date(std::string_view text) {
  // "Sun, 17 Apr 2011 00:00:00 GMT" -- fixed-width RFC 1123.
  std::size_t pos = 0;
  if (text.size() != 29) throw MalformedDate("bad RFC 1123 date: '" + std::string(text) + "'");
  const int wd = match_name(text.substr(0, 3), kWeekdayNames.data(), 7);
  if (wd < 0) throw MalformedDate("bad weekday in '" + std::string(text) + "'");
  pos = 3;
  CivilTime ct;
  if (!take_literal(text, pos, ", ") ||
      !take_digits(text, pos, 2, ct.day) ||
      !take_literal(text, pos, " "))
    throw MalformedDate("bad RFC 1123 date: '" + std::string(text) + "'");
  const int mon = match_name(text.substr(pos, 3), kMonthNames.data(), 12);
  if (mon < 0) throw MalformedDate("bad month in '" + std::string(text) + "'");
  ct.month = mon + 1;
  pos += 3;
  if (!take_literal(text, pos, " ") ||
      !take_digits(text, pos, 4, ct.year) ||
      !take_literal(text, pos, " ") ||
      !take_digits(text, pos, 2, ct.hour) ||
      !take_literal(text, pos, ":") ||
      !take_digits(text, pos, 2, ct.minute) ||
      !take_literal(text, pos, ":") ||
      !take_digits(text, pos, 2, ct.second) ||
      !take_literal(text, pos, " GMT"))
    throw MalformedDate("bad RFC 1123 date: '" + std::string(text) + "'");
  if (!valid_civil(ct))
    throw MalformedDate("impossible calendar datetime: '" + std::string(text) + "'");
  // The weekday token is required to be well formed but, as with most HTTP
  // implementations, is not cross-checked against the date itself.
  return civil_to_epoch(ct);
}

std::string format_http_date(EpochSecond t) {
  const CivilTime ct = epoch_to_civil(t);
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s, %02d %s %04d %02d:%02d:%02d GMT",
                kWeekdayNames[day_of_week(t)], ct.day, kMonthNames[ct.month - 1],
                ct.year, ct.hour, ct.minute, ct.second);
  return buf;
}

EpochSecond parse_iso8601(std::string_view text) {
  CivilTime ct;
  std::size_t pos = 0;
  if (!take_digits(text, pos, 4, ct.year) ||
      !take_literal(text, pos, "-") ||
      !take_digits(text, pos, 2, ct.month) ||
      !take_literal(text, pos, "-") ||
      !take_digits(text, pos, 2, ct.day))
    throw MalformedDate("bad ISO-8601 datetime: '" + std::string(text) + "'");
  if (pos != text.size()) {
    if (!take_literal(text, pos, "T") ||
        !take_digits(text, pos, 2, ct.hour) ||
        !take_literal(text, pos, ":") ||
        !take_digits(text, pos, 2, ct.minute) ||
        !take_literal(text, pos, ":") ||
        !take_digits(text, pos, 2, ct.second))
      throw MalformedDate("bad ISO-8601 datetime: '" + std::string(text) + "'");
    if (pos < text.size() && !take_literal(text, pos, "Z"))
      throw MalformedDate("bad ISO-8601 datetime: '" + std::string(text) + "'");
    if (pos != text.size())
      throw MalformedDate("trailing junk in '" + std::string(text) + "'");
  }
  if (!valid_civil(ct))
    throw MalformedDate("impossible calendar datetime: '" + std::string(text) + "'");
  return civil_to_epoch(ct);
}

std::string format_iso8601(EpochSecond t) {
  const CivilTime ct = epoch_to_civil(t);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", ct.year,
                ct.month, ct.day, ct.hour, ct.minute, ct.second);
  return buf;
}

std::optional<EpochSecond> parse_archive_timestamp(std::string_view digits) {
  if (digits.size() != 14) return std::nullopt;
  CivilTime ct;
  std::size_t pos = 0;
  if (!take_digits(digits, pos, 4, ct.year) ||
      !take_digits(digits, pos, 2, ct.month) ||
      !take_digits(digits, pos, 2, ct.day) ||
      !take_digits(digits, pos, 2, ct.hour) ||
      !take_digits(digits, pos, 2, ct.minute) ||
      !take_digits(digits, pos, 2, ct.second))
    return std::nullopt;
  if (!valid_civil(ct)) return std::nullopt;
  return civil_to_epoch(ct);
}

std::string format_archive_timestamp(EpochSecond t) {
  const CivilTime ct = epoch_to_civil(t);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%04d%02d%02d%02d%02d%02d", ct.year, ct.month,
                ct.day, ct.hour, ct.minute, ct.second);
  return buf;
}

}  // namespace wikimento
