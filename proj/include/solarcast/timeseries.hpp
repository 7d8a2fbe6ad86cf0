#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solarcast/calendar.hpp"

namespace solarcast {

// One hourly weather/irradiance observation. Field order follows the input
// schema; cloud_type keeps an explicit absent state instead of a sentinel.
struct HourlyRecord {
    int year = 0;
    int month = 0;
    int day = 0;
    int hour = 0;
    int minute = 0;

    double solar_zenith_angle = 0.0;  // degrees
    double surface_albedo = 0.0;
    double precipitable_water = 0.0;  // cm
    double clearsky_dhi = 0.0;        // W/m^2
    double clearsky_dni = 0.0;
    double clearsky_ghi = 0.0;
    std::optional<int> cloud_type;
    double dew_point = 0.0;           // degC
    double relative_humidity = 0.0;   // percent
    double pressure = 0.0;            // mbar
    double dhi = 0.0;                 // W/m^2
    double dni = 0.0;
    double ghi = 0.0;
    int fill_flag = 0;
    double temperature = 0.0;         // degC
    double wind_direction = 0.0;      // degrees
    double wind_speed = 0.0;          // m/s

    int64_t epoch_minutes = 0;  // local-clock minutes since 1970-01-01 00:00

    CivilTime civil() const { return {year, month, day, hour, minute}; }

    void set_time(const CivilTime& t) {
        year = t.year;
        month = t.month;
        day = t.day;
        hour = t.hour;
        minute = t.minute;
        epoch_minutes = to_epoch_minutes(t);
    }

    bool operator==(const HourlyRecord&) const = default;
};

struct TimeSeries {
    std::vector<HourlyRecord> records;
    std::string source_id;
    int timezone_offset_hours = 0;

    size_t size() const { return records.size(); }
    bool empty() const { return records.empty(); }
};

// Canonical numeric variables of a record, in input-column order. Used by the
// summary table, the validator, serialization and the correlation matrix.
enum class Variable {
    year,
    month,
    day,
    hour,
    minute,
    solar_zenith_angle,
    surface_albedo,
    precipitable_water,
    clearsky_dhi,
    clearsky_dni,
    clearsky_ghi,
    cloud_type,
    dew_point,
    relative_humidity,
    pressure,
    dhi,
    dni,
    fill_flag,
    ghi,
    temperature,
    wind_direction,
    wind_speed,
};

inline constexpr Variable kAllVariables[] = {
    Variable::year,          Variable::month,
    Variable::day,           Variable::hour,
    Variable::minute,        Variable::solar_zenith_angle,
    Variable::surface_albedo, Variable::precipitable_water,
    Variable::clearsky_dhi,  Variable::clearsky_dni,
    Variable::clearsky_ghi,  Variable::cloud_type,
    Variable::dew_point,     Variable::relative_humidity,
    Variable::pressure,      Variable::dhi,
    Variable::dni,           Variable::fill_flag,
    Variable::ghi,           Variable::temperature,
    Variable::wind_direction, Variable::wind_speed,
};

const char* variable_name(Variable v);

// Case-insensitive lookup by the input column name ("Clearsky GHI", ...).
std::optional<Variable> variable_from_name(const std::string& name);

// Value of a variable; missing cloud_type yields nullopt.
std::optional<double> variable_value(const HourlyRecord& r, Variable v);

void set_variable_value(HourlyRecord& r, Variable v, double value);

}  // namespace solarcast
