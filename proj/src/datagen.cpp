#include "solarcast/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>

#include "solarcast/common.hpp"
#include "solarcast/rng.hpp"

namespace solarcast::datagen {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegToRad = kPi / 180.0;

// Site: Ibadan, Nigeria.
constexpr double kLatitude = 7.4515;
constexpr double kLongitude = 3.8899;
constexpr int kTimezone = 1;

// Irradiance below this clear-sky GHI is reported as dark (all zeros).
constexpr double kDarkGhiThreshold = 1.0;
constexpr double kMaxZenithForLight = 89.2;

// Monthly climatology anchors, interpolated over the day of year. The dry
// season (Nov..Mar) carries the harmattan aerosol load; the wet season
// (May..Oct) carries the cloud load.
constexpr double kAodMonth[12] = {0.88, 0.76, 0.56, 0.40, 0.30, 0.26,
                                  0.28, 0.30, 0.28, 0.28, 0.44, 0.74};
constexpr double kPwMonth[12] = {3.60, 3.90, 4.55, 4.95, 5.25, 5.40,
                                 5.35, 5.40, 5.45, 5.25, 4.70, 3.90};
constexpr double kCloudMonth[12] = {0.30, 0.33, 0.44, 0.52, 0.63, 0.74,
                                    0.82, 0.84, 0.78, 0.62, 0.42, 0.32};
constexpr double kTempMonth[12] = {25.9, 27.2, 27.6, 27.0, 26.2, 25.0,
                                   24.1, 23.9, 24.4, 25.1, 25.8, 25.7};
constexpr double kDewMonth[12] = {19.2, 20.6, 22.4, 23.2, 23.4, 23.3,
                                  23.0, 22.9, 23.1, 23.3, 22.6, 20.4};
constexpr double kWindMonth[12] = {1.45, 1.55, 1.65, 1.60, 1.50, 1.55,
                                   1.70, 1.75, 1.60, 1.35, 1.25, 1.35};
constexpr double kPressMonth[12] = {987.9, 987.6, 987.0, 986.9, 987.0, 987.4,
                                    987.7, 987.8, 987.5, 987.1, 987.1, 987.6};

// Noise levels; these set how much of the irradiance variation is
// irreducible for a forecaster that sees weather and cloud type.
struct SimKnobs {
    double aod_day_ar = 0.72;
    double aod_day_sigma = 0.55;
    double aod_scale = 0.38;
    double aod_intraday = 0.05;
    double pw_day_sigma = 0.50;
    double cloud_day_ar = 0.60;
    double cloud_day_sigma = 0.75;
    double cloud_day_scale = 0.22;
    double opacity_sigma_wet = 0.17;
    double opacity_sigma_dry = 0.10;
    double opacity_spike_prob = 0.10;
    double opacity_spike_scale = 2.4;
    double opacity_hour_ar = 0.55;
    double beam_divisor = 0.78;
    double beam_exponent = 1.25;
    double beam_jitter = 0.05;
    double diffuse_redistribution = 0.72;
    double diffuse_jitter = 0.05;
    double type_blur = 0.10;
};

constexpr SimKnobs kKnobs{};

// Periodic interpolation of monthly anchors placed at mid-month.
double monthly_interp(const double* anchors, double doy, double year_length) {
    const double pos = doy / year_length * 12.0 - 0.5;  // anchor m at month centre
    double lo = std::floor(pos);
    const double frac = pos - lo;
    int i0 = static_cast<int>(lo);
    int i1 = i0 + 1;
    i0 = ((i0 % 12) + 12) % 12;
    i1 = ((i1 % 12) + 12) % 12;
    return anchors[i0] * (1.0 - frac) + anchors[i1] * frac;
}

// Spencer declination/eccentricity series and sunrise-style zenith; this is
// deliberately a different formulation than the PSA ephemeris used by the PV
// chain so the dataset's zenith column is an independent cross-check.
struct SunState {
    double zenith_deg;
    double cos_zenith;
    double e0;  // extraterrestrial normal irradiance
};

SunState sun_state(int year, int doy, double hour_local) {
    const double year_len = is_leap_year(year) ? 366.0 : 365.0;
    const double g = 2.0 * kPi * (static_cast<double>(doy) - 1.0 + (hour_local - 12.0) / 24.0) /
                     year_len;
    const double decl = 0.006918 - 0.399912 * std::cos(g) + 0.070257 * std::sin(g) -
                        0.006758 * std::cos(2.0 * g) + 0.000907 * std::sin(2.0 * g) -
                        0.002697 * std::cos(3.0 * g) + 0.00148 * std::sin(3.0 * g);
    const double eot_min = 229.18 * (0.000075 + 0.001868 * std::cos(g) -
                                     0.032077 * std::sin(g) - 0.014615 * std::cos(2.0 * g) -
                                     0.040849 * std::sin(2.0 * g));
    const double tst_min =
        hour_local * 60.0 + 4.0 * (kLongitude - 15.0 * kTimezone) + eot_min;
    const double hour_angle = (tst_min / 4.0 - 180.0) * kDegToRad;
    const double lat = kLatitude * kDegToRad;
    double cosz = std::sin(lat) * std::sin(decl) +
                  std::cos(lat) * std::cos(decl) * std::cos(hour_angle);
    cosz = std::clamp(cosz, -1.0, 1.0);
    const double ecc = 1.00011 + 0.034221 * std::cos(g) + 0.00128 * std::sin(g) +
                       0.000719 * std::cos(2.0 * g) + 0.000077 * std::sin(2.0 * g);
    return {std::acos(cosz) / kDegToRad, cosz, 1367.0 * ecc};
}

double kasten_young_airmass(double zenith_deg, double cos_zenith) {
    const double denom =
        cos_zenith + 0.50572 * std::pow(96.07995 - zenith_deg, -1.6364);
    return std::min(1.0 / std::max(denom, 1e-4), 38.0);
}

double magnus_vapor_ratio(double t_dew, double t_air) {
    auto es = [](double t) { return std::exp(17.625 * t / (243.04 + t)); };
    return es(t_dew) / es(t_air);
}

double round_to(double v, double grid) { return std::round(v / grid) * grid; }

// Raw (uncalibrated) simulation output, column-major.
struct SimColumns {
    std::vector<CivilTime> stamps;
    std::vector<double> zenith, albedo, pw, cs_dhi, cs_dni, cs_ghi;
    std::vector<int> cloud_type;
    std::vector<double> dew, rh, pressure, dhi, dni, ghi, temp, wdir, wspd;

    void reserve(size_t n) {
        stamps.reserve(n);
        for (auto* col : {&zenith, &albedo, &pw, &cs_dhi, &cs_dni, &cs_ghi, &dew, &rh,
                          &pressure, &dhi, &dni, &ghi, &temp, &wdir, &wspd}) {
            col->reserve(n);
        }
        cloud_type.reserve(n);
    }
};

SimColumns simulate(const GenerationOptions& opts) {
    if (opts.end_year < opts.start_year) {
        throw UsageError("datagen: end year before start year");
    }
    SimColumns out;
    const int64_t first_day = days_from_civil(opts.start_year, 1, 1);
    const int64_t last_day = days_from_civil(opts.end_year, 12, 31);
    out.reserve(static_cast<size_t>(last_day - first_day + 1) * 24);

    Rng rng(opts.seed);
    const SimKnobs& k = kKnobs;

    // Year-scale anomalies (some years are dustier, wetter, warmer).
    std::map<int, double> aod_year, pw_year, temp_year, cloud_year;
    for (int y = opts.start_year; y <= opts.end_year; ++y) {
        Rng yr = Rng::substream(opts.seed, 0xA000 + static_cast<uint64_t>(y));
        aod_year[y] = 0.30 * yr.normal();
        pw_year[y] = 0.16 * yr.normal();
        temp_year[y] = 0.28 * yr.normal();
        cloud_year[y] = 0.045 * yr.normal();
    }

    // Day-scale AR(1) chains.
    double ar_aod = 0.0, ar_pw = 0.0, ar_cloud = 0.0, ar_temp = 0.0, ar_dew = 0.0,
           ar_press = 0.0, ar_wind = 0.0, ar_albedo = 0.0;
    // Hour-scale chains persist across day boundaries.
    double ar_o = 0.0, ar_t = 0.0, ar_aod_h = 0.0, ar_w = 0.0;

    for (int64_t dayn = first_day; dayn <= last_day; ++dayn) {
        int year, month, day;
        civil_from_days(dayn, year, month, day);
        const int doy = day_of_year(year, month, day);
        const double year_len = is_leap_year(year) ? 366.0 : 365.0;

        ar_aod = k.aod_day_ar * ar_aod + k.aod_day_sigma * rng.normal();
        ar_pw = 0.80 * ar_pw + k.pw_day_sigma * rng.normal();
        ar_cloud = k.cloud_day_ar * ar_cloud + k.cloud_day_sigma * rng.normal();
        ar_temp = 0.70 * ar_temp + 0.80 * rng.normal();
        ar_dew = 0.72 * ar_dew + 0.85 * rng.normal();
        double press_shock = rng.normal();
        if (rng.next_double() < 0.06) press_shock *= 2.2;
        ar_press = 0.55 * ar_press + 1.05 * press_shock;
        ar_wind = 0.60 * ar_wind + 0.28 * rng.normal();
        ar_albedo = 0.95 * ar_albedo + 0.05 * rng.normal();

        const double aod_season = monthly_interp(kAodMonth, doy, year_len);
        const double aod_day = std::clamp(
            aod_season * std::exp(k.aod_scale * (ar_aod + aod_year[year])), 0.16, 2.30);
        const double pw_season = monthly_interp(kPwMonth, doy, year_len);
        const double pw_day =
            std::clamp(pw_season + pw_year[year] + 0.55 * ar_pw -
                           1.60 * std::max(0.0, aod_day - 0.85),
                       0.75, 7.05);
        const double cloud_season = monthly_interp(kCloudMonth, doy, year_len);
        const double cloud_day = std::clamp(
            cloud_season + k.cloud_day_scale * ar_cloud + cloud_year[year], 0.02, 0.98);
        const double temp_mean = monthly_interp(kTempMonth, doy, year_len) +
                                 temp_year[year] + ar_temp;
        const double dew_day = monthly_interp(kDewMonth, doy, year_len) + 0.5 * ar_dew -
                               5.5 * std::max(0.0, aod_day - 0.80);
        const double press_day = monthly_interp(kPressMonth, doy, year_len) + ar_press;
        const double wind_day =
            std::max(0.35, monthly_interp(kWindMonth, doy, year_len) + ar_wind);

        const bool harmattan_flow =
            (month >= 11 || month <= 2) && aod_day > 0.72 && rng.next_double() < 0.85;
        const double wdir_mean = harmattan_flow ? 48.0 : 208.0;

        const double dryness =
            std::clamp((0.60 - cloud_season) / 0.45, 0.0, 1.0);
        const double albedo_day =
            std::clamp(0.118 + 0.050 * dryness + 0.025 * ar_albedo, 0.09, 0.24);

        const double wetness = std::clamp((cloud_season - 0.35) / 0.45, 0.0, 1.0);
        const double sigma_o =
            k.opacity_sigma_dry + (k.opacity_sigma_wet - k.opacity_sigma_dry) * wetness;

        for (int h = 0; h < 24; ++h) {
            const double hour_local = static_cast<double>(h) + 0.5;
            const SunState sun = sun_state(year, doy, hour_local);
            const bool daylight =
                sun.zenith_deg < kMaxZenithForLight && sun.cos_zenith > 0.0;

            ar_aod_h = 0.85 * ar_aod_h + 0.30 * rng.normal();
            const double aod = std::clamp(
                aod_day * (1.0 + k.aod_intraday * ar_aod_h), 0.14, 2.45);
            const double pw = std::clamp(
                pw_day + 0.15 * std::sin(2.0 * kPi * (hour_local - 16.0) / 24.0) +
                    0.06 * rng.normal(),
                0.70, 7.10);

            // Opacity: day-level cloudiness modulated by an hourly AR chain, a
            // wet-season afternoon convection bump and irreducible noise.
            ar_o = k.opacity_hour_ar * ar_o + std::sqrt(1.0 - k.opacity_hour_ar *
                                                        k.opacity_hour_ar) * rng.normal();
            double spike = rng.normal();
            if (rng.next_double() < k.opacity_spike_prob) spike *= k.opacity_spike_scale;
            const double conv = wetness * 0.14 *
                                std::exp(-0.5 * std::pow((hour_local - 15.5) / 3.2, 2.0)) *
                                (0.4 + 0.6 * cloud_day);
            double opacity = cloud_day * (0.52 + 0.34 * ar_o) + conv - 0.06 +
                             sigma_o * spike;
            opacity = std::clamp(opacity, 0.0, 1.0);

            // Cloud type code from blurred opacity.
            const double type_obs =
                std::clamp(opacity + k.type_blur * rng.normal(), 0.0, 1.0);
            const double u = rng.next_double();
            int ctype;
            if (type_obs < 0.06) {
                ctype = 0;
            } else if (type_obs < 0.18) {
                ctype = u < 0.50 ? 0 : 1;
            } else if (type_obs < 0.32) {
                ctype = u < 0.45 ? 1 : 7;
            } else if (type_obs < 0.50) {
                ctype = u < 0.50 ? 7 : 3;
            } else if (type_obs < 0.68) {
                ctype = u < 0.60 ? 3 : 4;
            } else if (type_obs < 0.85) {
                ctype = u < 0.55 ? 4 : 6;
            } else {
                ctype = u < 0.60 ? 6 : 8;
                if (rng.next_double() < 0.03) ctype = 9;
            }

            // Clear-sky irradiance from airmass, water vapour and aerosol.
            double cs_dni = 0.0, cs_dhi = 0.0, cs_ghi = 0.0;
            double dni = 0.0, dhi = 0.0, ghi = 0.0;
            if (daylight) {
                const double m = kasten_young_airmass(sun.zenith_deg, sun.cos_zenith);
                const double tau_b = 0.105 + 0.077 * std::log1p(pw) + 0.72 * aod;
                cs_dni = sun.e0 * 0.985 * std::exp(-tau_b * m);
                const double scat = 1.0 - std::exp(-0.65 * aod * std::min(m, 6.0));
                const double frac =
                    (0.042 + 0.44 * scat) * std::exp(-0.060 * (m - 1.0));
                cs_dhi = sun.e0 * sun.cos_zenith * frac;
                cs_ghi = cs_dni * sun.cos_zenith + cs_dhi;
                if (cs_ghi < kDarkGhiThreshold) {
                    cs_dni = cs_dhi = cs_ghi = 0.0;
                }

                // Actual irradiance: beam extinction and diffuse redistribution
                // under the opacity process, plus component-level jitter.
                if (cs_ghi > 0.0) {
                    const double o_beam =
                        std::clamp(opacity + 0.05 * rng.normal(), 0.0, 1.0);
                    double k_b =
                        std::pow(std::max(0.0, 1.0 - o_beam / k.beam_divisor),
                                 k.beam_exponent);
                    k_b = std::clamp(k_b * (1.0 + k.beam_jitter * rng.normal()), 0.0, 1.03);
                    dni = cs_dni * k_b;
                    const double chi = k.diffuse_redistribution * opacity *
                                       (1.0 - 0.55 * opacity) *
                                       (1.0 + 0.08 * rng.normal());
                    dhi = cs_dhi * (1.0 - 0.18 * opacity + k.diffuse_jitter * rng.normal()) +
                          cs_dni * sun.cos_zenith * std::max(chi, 0.0);
                    dhi = std::max(dhi, 0.0);
                    ghi = dni * sun.cos_zenith + dhi;
                }
            }

            // Temperature: seasonal mean, diurnal swing with clear-day
            // amplification, and same-hour cloud cooling.
            ar_t = 0.50 * ar_t + 0.80 * rng.normal();
            const double amp = 3.1 + 2.4 * (1.0 - cloud_day);
            const double shape =
                0.85 * std::cos(2.0 * kPi * (hour_local - 14.8) / 24.0) +
                0.15 * std::cos(4.0 * kPi * (hour_local - 14.8) / 24.0);
            double temp = temp_mean + amp * shape + 0.8 * ar_t;
            if (daylight) temp -= 1.3 * (opacity - cloud_day);

            double dew = dew_day + 0.25 * std::sin(2.0 * kPi * (hour_local - 8.0) / 24.0) +
                         0.30 * rng.normal();
            dew = std::min(dew, temp + 1.5);
            double rh = 100.0 * magnus_vapor_ratio(dew, temp);
            rh = std::clamp(rh, 8.0, 100.0);

            const double pressure = press_day +
                                    1.30 * std::cos(2.0 * kPi * (hour_local - 10.0) / 12.0) +
                                    0.30 * rng.normal();

            ar_w = 0.55 * ar_w + 0.45 * rng.normal();
            const double conv_wind =
                std::max(0.0, std::sin(kPi * (hour_local - 7.0) / 11.0));
            double wspd = wind_day * (0.55 + 0.80 * conv_wind) + 0.30 * ar_w +
                          0.18 * std::abs(rng.normal());
            wspd = std::clamp(wspd, 0.1, 6.2);

            double wdir;
            if (rng.next_double() < 0.02) {
                wdir = 1.0 + rng.next_double() * 359.0;
            } else {
                wdir = wdir_mean + 24.0 * rng.normal();
                wdir = std::fmod(std::fmod(wdir, 360.0) + 360.0, 360.0);
                if (wdir < 1.0) wdir = 360.0;
            }

            CivilTime stamp{year, month, day, h, 30};
            out.stamps.push_back(stamp);
            out.zenith.push_back(round_to(sun.zenith_deg, 0.01));
            out.albedo.push_back(round_to(albedo_day, 0.01));
            out.pw.push_back(pw);
            out.cs_dhi.push_back(cs_dhi);
            out.cs_dni.push_back(cs_dni);
            out.cs_ghi.push_back(cs_ghi);
            out.cloud_type.push_back(ctype);
            out.dew.push_back(dew);
            out.rh.push_back(rh);
            out.pressure.push_back(pressure);
            out.dhi.push_back(dhi);
            out.dni.push_back(dni);
            out.ghi.push_back(ghi);
            out.temp.push_back(temp);
            out.wdir.push_back(wdir);
            out.wspd.push_back(wspd);
        }
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Marginal calibration
// ---------------------------------------------------------------------------

namespace {

struct Anchor {
    double sim;     // simulated value at the anchor rank
    double target;  // required value at that rank
};

double sorted_at(const std::vector<double>& sorted, double pos) {
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

}  // namespace

std::vector<double> calibrate_marginal(std::vector<double> values,
                                       const MarginalTarget& t) {
    const size_t n = values.size();
    if (n < 16) {
        throw UsageError("calibrate_marginal: sample too small");
    }
    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (values[a] != values[b]) return values[a] < values[b];
        return a < b;
    });
    std::vector<double> sorted(n);
    for (size_t i = 0; i < n; ++i) sorted[i] = values[order[i]];

    const double nd = static_cast<double>(n - 1);
    const Anchor anchors[5] = {
        {sorted.front(), t.min},
        {sorted_at(sorted, 0.25 * nd), t.q25},
        {sorted_at(sorted, 0.50 * nd), t.q50},
        {sorted_at(sorted, 0.75 * nd), t.q75},
        {sorted.back(), t.max},
    };
    for (int i = 0; i < 4; ++i) {
        if (anchors[i + 1].sim < anchors[i].sim ||
            anchors[i + 1].target < anchors[i].target) {
            throw DataError("calibrate_marginal: anchors not monotone");
        }
        if (anchors[i + 1].sim == anchors[i].sim &&
            anchors[i + 1].target > anchors[i].target) {
            throw DataError(
                "calibrate_marginal: simulated sample has no spread across a "
                "target quantile segment");
        }
    }

    // Quantile-anchored piecewise-linear warp, then grid rounding.
    int seg = 0;
    for (size_t i = 0; i < n; ++i) {
        const double v = sorted[i];
        while (seg < 3 && v > anchors[seg + 1].sim) ++seg;
        const Anchor& a = anchors[seg];
        const Anchor& b = anchors[seg + 1];
        double w;
        if (b.sim == a.sim) {
            w = a.target;
        } else {
            const double u = std::clamp((v - a.sim) / (b.sim - a.sim), 0.0, 1.0);
            w = a.target + u * (b.target - a.target);
        }
        sorted[i] = round_to(w, t.grid);
    }

    // Count-level moment repair: shift counts between adjacent grid values in
    // the open quantile segments until mean and std match the target. Moves
    // never involve an anchor value, so the pinned quantiles stay exact.
    std::map<int64_t, int64_t> hist;
    for (double v : sorted) {
        hist[static_cast<int64_t>(std::llround(v / t.grid))] += 1;
    }
    auto is_anchor_level = [&](int64_t level) {
        for (const auto& a : anchors) {
            if (level == static_cast<int64_t>(std::llround(a.target / t.grid))) return true;
        }
        return false;
    };

    long double s_sum = 0.0L, q_sum = 0.0L;
    for (const auto& [level, count] : hist) {
        const long double v = static_cast<long double>(level) * t.grid;
        s_sum += v * count;
        q_sum += v * v * count;
    }
    const long double s_target = static_cast<long double>(t.mean) * n;
    const long double q_target =
        static_cast<long double>(t.std) * t.std * (n - 1) +
        s_target * s_target / n;
    const double tol_s = 1.5e-3 * static_cast<double>(n);
    const double tol_q = 1.5e-3 * 2.0 * std::max(t.std, 1e-3) * static_cast<double>(n - 1);

    for (int iter = 0; iter < 400; ++iter) {
        const double ds = static_cast<double>(s_target - s_sum);
        const double dq = static_cast<double>(q_target - q_sum);
        if (std::abs(ds) < tol_s && std::abs(dq) < tol_q) break;

        // Candidate moves: (level -> level +/- 1) inside quantile segments.
        struct Move {
            int64_t level;
            int dir;
            int64_t cap;
            double es, eq;
        };
        std::vector<Move> moves;
        for (const auto& [level, count] : hist) {
            if (count < 2 || is_anchor_level(level)) continue;
            const double v = static_cast<double>(level) * t.grid;
            for (int dir : {+1, -1}) {
                const int64_t dest = level + dir;
                if (is_anchor_level(dest)) continue;
                const double vd = static_cast<double>(dest) * t.grid;
                if (vd < t.min || vd > t.max) continue;
                moves.push_back({level, dir, count / 2, dir * t.grid,
                                 vd * vd - v * v});
            }
        }
        if (moves.empty()) break;

        double best_score = std::numeric_limits<double>::infinity();
        const Move* best = nullptr;
        int64_t best_c = 0;
        for (const auto& mv : moves) {
            const double a11 = mv.es / tol_s, a21 = mv.eq / tol_q;
            const double b1 = ds / tol_s, b2 = dq / tol_q;
            double c = (a11 * b1 + a21 * b2) / (a11 * a11 + a21 * a21);
            int64_t ci = static_cast<int64_t>(std::llround(c));
            ci = std::clamp<int64_t>(ci, 0, mv.cap);
            if (ci == 0) continue;
            const double r1 = b1 - a11 * static_cast<double>(ci);
            const double r2 = b2 - a21 * static_cast<double>(ci);
            const double score = r1 * r1 + r2 * r2;
            if (score < best_score) {
                best_score = score;
                best = &mv;
                best_c = ci;
            }
        }
        if (!best) break;
        hist[best->level] -= best_c;
        hist[best->level + best->dir] += best_c;
        if (hist[best->level] == 0) hist.erase(best->level);
        s_sum += static_cast<long double>(best->es) * best_c;
        q_sum += static_cast<long double>(best->eq) * best_c;
    }

    // Rebuild the sorted sample from the histogram and undo the ordering.
    size_t i = 0;
    for (const auto& [level, count] : hist) {
        const double v = static_cast<double>(level) * t.grid;
        for (int64_t c = 0; c < count; ++c) sorted[i++] = v;
    }
    std::vector<double> out(n);
    for (size_t k = 0; k < n; ++k) out[order[k]] = sorted[k];
    return out;
}

// ---------------------------------------------------------------------------
// Reference climatology targets (13 calibrated variables)
// ---------------------------------------------------------------------------

bool has_site_target(Variable v) {
    switch (v) {
        case Variable::precipitable_water:
        case Variable::dew_point:
        case Variable::relative_humidity:
        case Variable::pressure:
        case Variable::temperature:
        case Variable::wind_direction:
        case Variable::wind_speed:
        case Variable::clearsky_dhi:
        case Variable::clearsky_dni:
        case Variable::clearsky_ghi:
        case Variable::dhi:
        case Variable::dni:
        case Variable::ghi:
            return true;
        default:
            return false;
    }
}

const MarginalTarget& site_target(Variable v) {
    //                                min     q25    q50    q75    max     mean    std    grid
    static const MarginalTarget pw{0.80, 4.20, 4.90, 5.40, 6.90, 4.65, 0.99, 0.1};
    static const MarginalTarget dew{5.00, 22.40, 23.40, 24.20, 27.30, 22.81, 2.49, 0.1};
    static const MarginalTarget rh{19.28, 79.95, 94.40, 100.0, 100.0, 88.44, 13.87, 0.01};
    static const MarginalTarget press{980.0, 986.0, 987.0, 989.0, 994.0, 987.37, 1.92, 1.0};
    static const MarginalTarget temp{11.30, 23.00, 24.60, 27.30, 35.50, 25.11, 2.91, 0.1};
    static const MarginalTarget wdir{1.0, 190.0, 210.0, 229.0, 360.0, 198.79, 59.40, 1.0};
    static const MarginalTarget wspd{0.10, 0.90, 1.30, 2.00, 5.60, 1.50, 0.77, 0.1};
    static const MarginalTarget cdhi{0.0, 0.0, 0.0, 172.0, 670.0, 94.45, 123.89, 1.0};
    static const MarginalTarget cdni{0.0, 0.0, 0.0, 524.0, 934.0, 237.70, 299.11, 1.0};
    static const MarginalTarget cghi{0.0, 0.0, 0.0, 589.0, 1021.0, 268.96, 346.26, 1.0};
    static const MarginalTarget adhi{0.0, 0.0, 0.0, 220.0, 740.0, 117.39, 161.45, 1.0};
    static const MarginalTarget adni{0.0, 0.0, 0.0, 133.0, 921.0, 115.92, 211.62, 1.0};
    static const MarginalTarget aghi{0.0, 0.0, 0.0, 392.0, 1020.0, 201.81, 284.82, 1.0};
    switch (v) {
        case Variable::precipitable_water: return pw;
        case Variable::dew_point: return dew;
        case Variable::relative_humidity: return rh;
        case Variable::pressure: return press;
        case Variable::temperature: return temp;
        case Variable::wind_direction: return wdir;
        case Variable::wind_speed: return wspd;
        case Variable::clearsky_dhi: return cdhi;
        case Variable::clearsky_dni: return cdni;
        case Variable::clearsky_ghi: return cghi;
        case Variable::dhi: return adhi;
        case Variable::dni: return adni;
        case Variable::ghi: return aghi;
        default:
            throw UsageError("no site target for variable");
    }
}

// ---------------------------------------------------------------------------
// Assembly
// ---------------------------------------------------------------------------

TimeSeries generate(const GenerationOptions& opts) {
    SimColumns sim = simulate(opts);
    const size_t n = sim.stamps.size();

    struct Column {
        Variable var;
        std::vector<double>* data;
        double grid;  // rounding when not calibrated
    };
    Column columns[] = {
        {Variable::precipitable_water, &sim.pw, 0.1},
        {Variable::dew_point, &sim.dew, 0.1},
        {Variable::relative_humidity, &sim.rh, 0.01},
        {Variable::pressure, &sim.pressure, 1.0},
        {Variable::temperature, &sim.temp, 0.1},
        {Variable::wind_direction, &sim.wdir, 1.0},
        {Variable::wind_speed, &sim.wspd, 0.1},
        {Variable::clearsky_dhi, &sim.cs_dhi, 1.0},
        {Variable::clearsky_dni, &sim.cs_dni, 1.0},
        {Variable::clearsky_ghi, &sim.cs_ghi, 1.0},
        {Variable::dhi, &sim.dhi, 1.0},
        {Variable::dni, &sim.dni, 1.0},
        {Variable::ghi, &sim.ghi, 1.0},
    };
    for (auto& col : columns) {
        if (opts.calibrate && has_site_target(col.var)) {
            *col.data = calibrate_marginal(std::move(*col.data), site_target(col.var));
        } else {
            for (double& v : *col.data) v = round_to(v, col.grid);
        }
    }

    TimeSeries ts;
    ts.source_id = "datagen";
    ts.timezone_offset_hours = kTimezone;
    ts.records.resize(n);
    for (size_t i = 0; i < n; ++i) {
        HourlyRecord& r = ts.records[i];
        r.set_time(sim.stamps[i]);
        r.solar_zenith_angle = sim.zenith[i];
        r.surface_albedo = sim.albedo[i];
        r.precipitable_water = sim.pw[i];
        r.clearsky_dhi = sim.cs_dhi[i];
        r.clearsky_dni = sim.cs_dni[i];
        r.clearsky_ghi = sim.cs_ghi[i];
        r.cloud_type = sim.cloud_type[i];
        r.dew_point = sim.dew[i];
        r.relative_humidity = sim.rh[i];
        r.pressure = sim.pressure[i];
        r.dhi = sim.dhi[i];
        r.dni = sim.dni[i];
        r.ghi = sim.ghi[i];
        r.fill_flag = 0;
        r.temperature = sim.temp[i];
        r.wind_direction = sim.wdir[i];
        r.wind_speed = sim.wspd[i];
    }
    return ts;
}

void write_nsrdb_csv(const TimeSeries& ts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open file for writing: " + path);
    }
    out << "Source,Location ID,City,Region,Country,Latitude,Longitude,Time Zone,"
           "Elevation,Local Time Zone\n";
    out << "solarcast-datagen,7451,Ibadan,Oyo,Nigeria,7.4515,3.8899,1,227,1\n";
    out << "Year,Month,Day,Hour,Minute,Solar Zenith Angle,Surface Albedo,"
           "Precipitable Water,Clearsky DHI,Clearsky DNI,Clearsky GHI,Cloud Type,"
           "Dew Point,Relative Humidity,Pressure,DHI,DNI,Fill Flag,GHI,Temperature,"
           "Wind Direction,Wind Speed\n";
    char buf[256];
    for (const auto& r : ts.records) {
        std::snprintf(buf, sizeof(buf),
                      "%d,%d,%d,%d,%d,%.2f,%.2f,%.1f,%.0f,%.0f,%.0f,%d,%.1f,%.2f,"
                      "%.0f,%.0f,%.0f,%d,%.0f,%.1f,%.0f,%.1f\n",
                      r.year, r.month, r.day, r.hour, r.minute, r.solar_zenith_angle,
                      r.surface_albedo, r.precipitable_water, r.clearsky_dhi,
                      r.clearsky_dni, r.clearsky_ghi, r.cloud_type.value_or(-1),
                      r.dew_point, r.relative_humidity, r.pressure, r.dhi, r.dni,
                      r.fill_flag, r.ghi, r.temperature, r.wind_direction, r.wind_speed);
        out << buf;
    }
}

}  // namespace solarcast::datagen
