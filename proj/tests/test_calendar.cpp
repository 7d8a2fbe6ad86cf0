#include <doctest.h>

#include "solarcast/calendar.hpp"

using namespace solarcast;

TEST_CASE("civil round trips") {
    for (int64_t day : {0LL, 12784LL, 19000LL, -1LL, 18262LL}) {
        int y, m, d;
        civil_from_days(day, y, m, d);
        CHECK(days_from_civil(y, m, d) == day);
    }
    CHECK(days_from_civil(1970, 1, 1) == 0);
    CHECK(days_from_civil(2005, 1, 1) == 12784);
}

TEST_CASE("epoch minute conversions") {
    CivilTime t{2010, 3, 1, 6, 30};
    CHECK(from_epoch_minutes(to_epoch_minutes(t)) == t);

    // +30 minutes crosses into the next hour and, at year end, the next year.
    CivilTime shifted = from_epoch_minutes(to_epoch_minutes(t) + 30);
    CHECK(shifted == CivilTime{2010, 3, 1, 7, 0});

    CivilTime nye{2010, 12, 31, 23, 30};
    CivilTime rolled = from_epoch_minutes(to_epoch_minutes(nye) + 30);
    CHECK(rolled == CivilTime{2011, 1, 1, 0, 0});
}

TEST_CASE("leap years") {
    CHECK(is_leap_year(2008));
    CHECK(is_leap_year(2000));
    CHECK_FALSE(is_leap_year(1900));
    CHECK_FALSE(is_leap_year(2022));
    CHECK(days_in_month(2020, 2) == 29);
    CHECK(days_in_month(2021, 2) == 28);
    CHECK(day_of_year(2005, 12, 31) == 365);
    CHECK(day_of_year(2008, 12, 31) == 366);

    // 2005..2022 hourly spans exactly 157776 stamps.
    const int64_t days = days_from_civil(2023, 1, 1) - days_from_civil(2005, 1, 1);
    CHECK(days * 24 == 157776);
}

TEST_CASE("timestamp formatting") {
    CHECK(format_timestamp({2022, 1, 5, 9, 30}) == "2022-01-05 09:30");
    CHECK(format_date({2022, 11, 30, 0, 0}) == "2022-11-30");
}
