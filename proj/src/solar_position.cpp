#include "solarcast/solar_position.hpp"

#include <cmath>
#include <numbers>

#include "solarcast/common.hpp"

namespace solarcast::pv {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kEarthMeanRadiusKm = 6371.01;
constexpr double kAstronomicalUnitKm = 149597890.0;
constexpr double kSolarConstant = 1367.0;  // W/m^2

}  // namespace

void Location::check() const {
    if (std::abs(latitude) > 90.0) throw UsageError("location: |latitude| > 90");
    if (std::abs(longitude) > 180.0) throw UsageError("location: |longitude| > 180");
}

double extraterrestrial_dni(int day_of_year) {
    // Spencer (1971) Fourier series for the orbit eccentricity factor.
    const double g = kTwoPi * static_cast<double>(day_of_year - 1) / 365.0;
    const double factor = 1.00011 + 0.034221 * std::cos(g) + 0.00128 * std::sin(g) +
                          0.000719 * std::cos(2.0 * g) + 0.000077 * std::sin(2.0 * g);
    return kSolarConstant * factor;
}

SolarGeometry solar_position(const CivilTime& when, const Location& loc) {
    loc.check();
    if (when.year < 1950 || when.year > 2050) {
        throw UsageError("solar_position: timestamp outside the 1950..2050 validity window");
    }

    // Convert the local clock to UT decimal hours.
    const double decimal_hours =
        static_cast<double>(when.hour) + static_cast<double>(when.minute) / 60.0 -
        static_cast<double>(loc.timezone_offset);

    // Julian day relative to J2000.0 (noon 2000-01-01 UT).
    const double julian_date =
        static_cast<double>(days_from_civil(when.year, when.month, when.day)) +
        2440587.5 + decimal_hours / 24.0;
    const double ejd = julian_date - 2451545.0;

    // Ecliptic coordinates.
    const double omega = 2.1429 - 0.0010394594 * ejd;
    const double mean_longitude = 4.8950630 + 0.017202791698 * ejd;
    const double mean_anomaly = 6.2400600 + 0.0172019699 * ejd;
    const double ecliptic_longitude =
        mean_longitude + 0.03341607 * std::sin(mean_anomaly) +
        0.00034894 * std::sin(2.0 * mean_anomaly) - 0.0001134 -
        0.0000203 * std::sin(omega);
    const double ecliptic_obliquity =
        0.4090928 - 6.2140e-9 * ejd + 0.0000396 * std::cos(omega);

    // Celestial coordinates.
    const double sin_el = std::sin(ecliptic_longitude);
    double right_ascension =
        std::atan2(std::cos(ecliptic_obliquity) * sin_el, std::cos(ecliptic_longitude));
    if (right_ascension < 0.0) right_ascension += kTwoPi;
    const double declination = std::asin(std::sin(ecliptic_obliquity) * sin_el);

    // Local horizontal coordinates.
    const double gmst = 6.6974243242 + 0.0657098283 * ejd + decimal_hours;
    const double lmst = (gmst * 15.0 + loc.longitude) * kDegToRad;
    const double hour_angle = lmst - right_ascension;
    const double lat = loc.latitude * kDegToRad;

    double zenith_rad = std::acos(std::cos(lat) * std::cos(hour_angle) * std::cos(declination) +
                                  std::sin(declination) * std::sin(lat));
    double azimuth = std::atan2(-std::sin(hour_angle),
                                std::tan(declination) * std::cos(lat) -
                                    std::sin(lat) * std::cos(hour_angle));
    if (azimuth < 0.0) azimuth += kTwoPi;

    // Parallax correction.
    zenith_rad += (kEarthMeanRadiusKm / kAstronomicalUnitKm) * std::sin(zenith_rad);

    SolarGeometry geom;
    geom.zenith = zenith_rad / kDegToRad;
    geom.apparent_azimuth = azimuth / kDegToRad;
    geom.extraterrestrial_dni =
        extraterrestrial_dni(day_of_year(when.year, when.month, when.day));
    return geom;
}

}  // namespace solarcast::pv
