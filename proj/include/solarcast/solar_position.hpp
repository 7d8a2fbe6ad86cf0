#pragma once

#include "solarcast/calendar.hpp"

namespace solarcast::pv {

struct Location {
    double latitude = 0.0;   // degrees, north positive
    double longitude = 0.0;  // degrees, east positive
    double altitude = 0.0;   // metres
    int timezone_offset = 0; // hours east of UTC of the series' local clock

    void check() const;
};

struct SolarGeometry {
    double zenith = 0.0;              // degrees
    double apparent_azimuth = 0.0;    // degrees, clockwise from north
    double aoi = 0.0;                 // degrees; filled by angle_of_incidence
    double extraterrestrial_dni = 0.0;  // W/m^2
};

// Sun position from the PSA closed-form ephemeris (Blanco-Muriel et al.,
// Solar Energy 2001), accuracy well under 0.01 deg over 1950..2050, plus
// extraterrestrial DNI from the solar constant with the Spencer eccentricity
// series. `when` is in the location's local clock.
SolarGeometry solar_position(const CivilTime& when, const Location& loc);

// Solar constant with eccentricity correction for a day of year.
double extraterrestrial_dni(int day_of_year);

}  // namespace solarcast::pv
