#include "trajanom/time_util.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace trajanom {

namespace {

// Floor division that is exact for negative numerators.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

bool parse_int(std::string_view s, int& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

std::int64_t days_from_civil(int y, int m, int d) {
    // Howard Hinnant's civil-date algorithm.
    y -= m <= 2;
    const std::int64_t era = floor_div(y, 400);
    const unsigned yoe = static_cast<unsigned>(y - era * 400);              // [0, 399]
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;   // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;             // [0, 146096]
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDateTime civil_from_unix(std::int64_t ts) {
    const std::int64_t z = floor_div(ts, 86400) + 719468;
    const std::int64_t era = floor_div(z, 146097);
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);

    std::int64_t sod = ts - floor_div(ts, 86400) * 86400;
    CivilDateTime c;
    c.year = static_cast<int>(y + (m <= 2));
    c.month = static_cast<int>(m);
    c.day = static_cast<int>(d);
    c.hour = static_cast<int>(sod / 3600);
    c.minute = static_cast<int>((sod % 3600) / 60);
    c.second = static_cast<int>(sod % 60);
    return c;
}

std::int64_t unix_from_civil(const CivilDateTime& c) {
    return days_from_civil(c.year, c.month, c.day) * 86400 + c.hour * 3600 +
           c.minute * 60 + c.second;
}

std::optional<std::int64_t> parse_iso8601(std::string_view text) {
    // YYYY-MM-DDTHH:MM:SS[.frac][Z]
    if (text.size() >= 1 && (text.back() == 'Z' || text.back() == 'z')) {
        text.remove_suffix(1);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        text = text.substr(0, dot);
    }
    if (text.size() != 19 || text[4] != '-' || text[7] != '-' ||
        (text[10] != 'T' && text[10] != ' ') || text[13] != ':' || text[16] != ':') {
        return std::nullopt;
    }
    CivilDateTime c;
    if (!parse_int(text.substr(0, 4), c.year) || !parse_int(text.substr(5, 2), c.month) ||
        !parse_int(text.substr(8, 2), c.day) || !parse_int(text.substr(11, 2), c.hour) ||
        !parse_int(text.substr(14, 2), c.minute) || !parse_int(text.substr(17, 2), c.second)) {
        return std::nullopt;
    }
    if (c.month < 1 || c.month > 12 || c.day < 1 || c.day > 31 || c.hour > 23 ||
        c.minute > 59 || c.second > 60) {
        return std::nullopt;
    }
    return unix_from_civil(c);
}

std::string format_iso8601(std::int64_t ts) {
    const CivilDateTime c = civil_from_unix(ts);
    std::array<char, 24> buf{};
    std::snprintf(buf.data(), buf.size(), "%04d-%02d-%02dT%02d:%02d:%02d", c.year,
                  c.month, c.day, c.hour, c.minute, c.second);
    return std::string(buf.data());
}

int hour_of_day(std::int64_t ts) {
    return static_cast<int>((ts - floor_div(ts, 86400) * 86400) / 3600);
}

int day_of_week(std::int64_t ts) {
    // 1970-01-01 was a Thursday; Monday = 0.
    return static_cast<int>((floor_div(ts, 86400) + 3) % 7);
}

}  // namespace trajanom
