#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <string>

#include "tweetcast/core/errors.hpp"

namespace tweetcast {

/// Proleptic-Gregorian civil calendar math on UTC epoch seconds.
/// Days-from-civil / civil-from-days follow the classic era-based
/// algorithm so no <ctime> locale or timezone state is involved.
struct CivilDateTime {
    int year = 1970;
    int month = 1;   // 1..12
    int day = 1;     // 1..31
    int hour = 0;    // 0..23
    int minute = 0;  // 0..59
    int second = 0;  // 0..59
    int day_of_week = 0;  // Monday = 0 .. Sunday = 6
    int day_of_year = 1;  // 1..366
    int iso_week = 1;     // 1..53
};

namespace detail {

inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline void civil_from_days(std::int64_t z, int& y, int& m, int& d) {
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

inline bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

// Weekday of Dec 31 (0 = Sunday convention internal to the 53-week rule).
inline int year_end_dow(int y) { return (y + y / 4 - y / 100 + y / 400) % 7; }

inline int iso_weeks_in_year(int y) {
    return 52 + (year_end_dow(y) == 4 || year_end_dow(y - 1) == 3);
}

} // namespace detail

inline CivilDateTime civil_from_epoch(std::int64_t epoch_seconds) {
    std::int64_t days = epoch_seconds / 86400;
    std::int64_t rem = epoch_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    CivilDateTime out;
    detail::civil_from_days(days, out.year, out.month, out.day);
    out.hour = static_cast<int>(rem / 3600);
    out.minute = static_cast<int>((rem % 3600) / 60);
    out.second = static_cast<int>(rem % 60);
    out.day_of_week = static_cast<int>(((days % 7) + 7 + 3) % 7);  // epoch day 0 was a Thursday
    const std::int64_t jan1 = detail::days_from_civil(out.year, 1, 1);
    out.day_of_year = static_cast<int>(days - jan1 + 1);
    const int iso_dow = out.day_of_week + 1;  // Monday = 1 .. Sunday = 7
    int week = (out.day_of_year - iso_dow + 10) / 7;
    if (week < 1)
        week = detail::iso_weeks_in_year(out.year - 1);
    else if (week > detail::iso_weeks_in_year(out.year))
        week = 1;
    out.iso_week = week;
    return out;
}

inline std::int64_t epoch_from_civil(int y, int m, int d, int hh = 0, int mm = 0, int ss = 0) {
    return detail::days_from_civil(y, m, d) * 86400 + hh * 3600LL + mm * 60LL + ss;
}

/// "YYYY-MM-DDTHH:MM:SSZ"
inline std::string iso8601_from_epoch(std::int64_t epoch_seconds) {
    const CivilDateTime c = civil_from_epoch(epoch_seconds);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", c.year, c.month, c.day,
                  c.hour, c.minute, c.second);
    return buf;
}

inline std::int64_t epoch_from_iso8601(const std::string& s) {
    int y, mo, d, h, mi, se;
    if (std::sscanf(s.c_str(), "%d-%d-%dT%d:%d:%d", &y, &mo, &d, &h, &mi, &se) != 6)
        throw ParseError("bad ISO-8601 timestamp: " + s);
    return epoch_from_civil(y, mo, d, h, mi, se);
}

/// Seven normalized calendar features of a timestamp, each in [0, 1].
/// Fixed denominators (366 days, 53 weeks) keep the encoding identical
/// across leap and common years.
struct TimeFeatures {
    double minute = 0.0;
    double hour = 0.0;
    double dayofweek = 0.0;
    double day = 0.0;
    double dayofyear = 0.0;
    double month = 0.0;
    double weekofyear = 0.0;

    std::array<double, 7> to_array() const {
        return {minute, hour, dayofweek, day, dayofyear, month, weekofyear};
    }

    static constexpr std::size_t kCount = 7;
};

inline TimeFeatures calendar_features(std::int64_t epoch_seconds) {
    const CivilDateTime c = civil_from_epoch(epoch_seconds);
    TimeFeatures f;
    f.minute = c.minute / 59.0;
    f.hour = c.hour / 23.0;
    f.dayofweek = c.day_of_week / 6.0;
    f.day = c.day / 31.0;
    f.dayofyear = c.day_of_year / 366.0;
    f.month = c.month / 12.0;
    f.weekofyear = c.iso_week / 53.0;
    return f;
}

} // namespace tweetcast
