#include "solarcast/timeseries.hpp"

#include <algorithm>
#include <cctype>

namespace solarcast {

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

}  // namespace

const char* variable_name(Variable v) {
    switch (v) {
        case Variable::year: return "Year";
        case Variable::month: return "Month";
        case Variable::day: return "Day";
        case Variable::hour: return "Hour";
        case Variable::minute: return "Minute";
        case Variable::solar_zenith_angle: return "Solar Zenith Angle";
        case Variable::surface_albedo: return "Surface Albedo";
        case Variable::precipitable_water: return "Precipitable Water";
        case Variable::clearsky_dhi: return "Clearsky DHI";
        case Variable::clearsky_dni: return "Clearsky DNI";
        case Variable::clearsky_ghi: return "Clearsky GHI";
        case Variable::cloud_type: return "Cloud Type";
        case Variable::dew_point: return "Dew Point";
        case Variable::relative_humidity: return "Relative Humidity";
        case Variable::pressure: return "Pressure";
        case Variable::dhi: return "DHI";
        case Variable::dni: return "DNI";
        case Variable::fill_flag: return "Fill Flag";
        case Variable::ghi: return "GHI";
        case Variable::temperature: return "Temperature";
        case Variable::wind_direction: return "Wind Direction";
        case Variable::wind_speed: return "Wind Speed";
    }
    return "?";
}

std::optional<Variable> variable_from_name(const std::string& name) {
    const std::string key = lower(name);
    for (Variable v : kAllVariables) {
        if (lower(variable_name(v)) == key) return v;
    }
    return std::nullopt;
}

std::optional<double> variable_value(const HourlyRecord& r, Variable v) {
    switch (v) {
        case Variable::year: return r.year;
        case Variable::month: return r.month;
        case Variable::day: return r.day;
        case Variable::hour: return r.hour;
        case Variable::minute: return r.minute;
        case Variable::solar_zenith_angle: return r.solar_zenith_angle;
        case Variable::surface_albedo: return r.surface_albedo;
        case Variable::precipitable_water: return r.precipitable_water;
        case Variable::clearsky_dhi: return r.clearsky_dhi;
        case Variable::clearsky_dni: return r.clearsky_dni;
        case Variable::clearsky_ghi: return r.clearsky_ghi;
        case Variable::cloud_type:
            if (!r.cloud_type) return std::nullopt;
            return static_cast<double>(*r.cloud_type);
        case Variable::dew_point: return r.dew_point;
        case Variable::relative_humidity: return r.relative_humidity;
        case Variable::pressure: return r.pressure;
        case Variable::dhi: return r.dhi;
        case Variable::dni: return r.dni;
        case Variable::fill_flag: return r.fill_flag;
        case Variable::ghi: return r.ghi;
        case Variable::temperature: return r.temperature;
        case Variable::wind_direction: return r.wind_direction;
        case Variable::wind_speed: return r.wind_speed;
    }
    return std::nullopt;
}

void set_variable_value(HourlyRecord& r, Variable v, double value) {
    switch (v) {
        case Variable::year: r.year = static_cast<int>(value); break;
        case Variable::month: r.month = static_cast<int>(value); break;
        case Variable::day: r.day = static_cast<int>(value); break;
        case Variable::hour: r.hour = static_cast<int>(value); break;
        case Variable::minute: r.minute = static_cast<int>(value); break;
        case Variable::solar_zenith_angle: r.solar_zenith_angle = value; break;
        case Variable::surface_albedo: r.surface_albedo = value; break;
        case Variable::precipitable_water: r.precipitable_water = value; break;
        case Variable::clearsky_dhi: r.clearsky_dhi = value; break;
        case Variable::clearsky_dni: r.clearsky_dni = value; break;
        case Variable::clearsky_ghi: r.clearsky_ghi = value; break;
        case Variable::cloud_type: r.cloud_type = static_cast<int>(value); break;
        case Variable::dew_point: r.dew_point = value; break;
        case Variable::relative_humidity: r.relative_humidity = value; break;
        case Variable::pressure: r.pressure = value; break;
        case Variable::dhi: r.dhi = value; break;
        case Variable::dni: r.dni = value; break;
        case Variable::fill_flag: r.fill_flag = static_cast<int>(value); break;
        case Variable::ghi: r.ghi = value; break;
        case Variable::temperature: r.temperature = value; break;
        case Variable::wind_direction: r.wind_direction = value; break;
        case Variable::wind_speed: r.wind_speed = value; break;
    }
}

}  // namespace solarcast
