#pragma once

#include <cstdint>
#include <cstdio>
#include <string>

namespace solarcast {

// Naive civil calendar arithmetic (no time zones, no leap seconds).
// Timestamps are minutes since 1970-01-01 00:00 in the series' local clock.

struct CivilTime {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31
    int hour = 0;   // 0..23
    int minute = 0; // 0..59

    bool operator==(const CivilTime&) const = default;
};

// Days since 1970-01-01 for a civil date (Howard Hinnant's algorithm).
constexpr int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

constexpr void civil_from_days(int64_t z, int& y, int& m, int& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int64_t yy = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    m = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    y = static_cast<int>(yy + (m <= 2));
}

constexpr bool is_leap_year(int y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

constexpr int days_in_month(int y, int m) {
    constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap_year(y) ? 29 : lengths[m - 1];
}

inline int64_t to_epoch_minutes(const CivilTime& t) {
    return days_from_civil(t.year, t.month, t.day) * 1440 + t.hour * 60 + t.minute;
}

inline CivilTime from_epoch_minutes(int64_t minutes) {
    int64_t days = minutes / 1440;
    int64_t rem = minutes % 1440;
    if (rem < 0) {
        rem += 1440;
        days -= 1;
    }
    CivilTime t;
    civil_from_days(days, t.year, t.month, t.day);
    t.hour = static_cast<int>(rem / 60);
    t.minute = static_cast<int>(rem % 60);
    return t;
}

// Day of year, 1-based.
inline int day_of_year(int y, int m, int d) {
    return static_cast<int>(days_from_civil(y, m, d) - days_from_civil(y, 1, 1)) + 1;
}

inline std::string format_timestamp(const CivilTime& t) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d", t.year, t.month, t.day,
                  t.hour, t.minute);
    return buf;
}

inline std::string format_date(const CivilTime& t) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", t.year, t.month, t.day);
    return buf;
}

}  // namespace solarcast
