#ifndef TRAJANOM_TIME_UTIL_HPP
#define TRAJANOM_TIME_UTIL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace trajanom {

struct CivilDateTime {
    int year = 1970;
    int month = 1;  // [1, 12]
    int day = 1;    // [1, 31]
    int hour = 0;
    int minute = 0;
    int second = 0;
};

/// Days since 1970-01-01 for a proleptic Gregorian civil date.
std::int64_t days_from_civil(int year, int month, int day);

CivilDateTime civil_from_unix(std::int64_t unix_seconds);

std::int64_t unix_from_civil(const CivilDateTime& c);

/// Parses "YYYY-MM-DDTHH:MM:SS" (optional trailing 'Z', optional fractional
/// seconds which are truncated). All timestamps are UTC.
std::optional<std::int64_t> parse_iso8601(std::string_view text);

std::string format_iso8601(std::int64_t unix_seconds);

/// Hour of day in [0, 23], UTC.
int hour_of_day(std::int64_t unix_seconds);

/// Day of week with Monday = 0 ... Sunday = 6, UTC.
int day_of_week(std::int64_t unix_seconds);

}  // namespace trajanom

#endif
