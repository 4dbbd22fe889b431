#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace wikimento {

// Seconds since 1970-01-01T00:00:00Z. The second is the smallest unit of
// datetime carried by HTTP headers, so it is the atomic unit everywhere in
// this library. All values are UTC; no local-time representation exists.
using EpochSecond = std::int64_t;

struct CivilTime {
  int year = 1970;
  int month = 1;  // 1..12
  int day = 1;    // 1..31
  int hour = 0;
  int minute = 0;
  int second = 0;
};

// Proleptic Gregorian conversions, exact over the full int64 day range.
// Hand-rolled so the results do not depend on the host's time zone database
// and round-trip bit-exactly.
EpochSecond civil_to_epoch(const CivilTime& ct);
CivilTime epoch_to_civil(EpochSecond t);

// 0 = Sunday .. 6 = Saturday.
int day_of_week(EpochSecond t);

// RFC 1123 dates as used by Accept-Datetime / Memento-Datetime, e.g.
// "Sun, 17 Apr 2011 00:00:00 GMT". parse_http_date accepts exactly this
// shape and throws MalformedDate otherwise; format_http_date is its
// exact inverse.
EpochSecond parse_http_date(std::string_view text);
std::string format_http_date(EpochSecond t);

// ISO-8601 UTC, either "YYYY-MM-DDTHH:MM:SS[Z]" or a bare "YYYY-MM-DD"
// (which becomes midnight UTC of that day). Throws MalformedDate.
EpochSecond parse_iso8601(std::string_view text);
std::string format_iso8601(EpochSecond t);

// 14-digit "YYYYMMDDHHMMSS" timestamps as embedded in archive URIs.
// Returns nothing when the digits do not form a valid calendar datetime.
std::optional<EpochSecond> parse_archive_timestamp(std::string_view digits);
std::string format_archive_timestamp(EpochSecond t);

}  // namespace wikimento
