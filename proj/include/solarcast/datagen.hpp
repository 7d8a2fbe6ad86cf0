#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "solarcast/timeseries.hpp"

namespace solarcast::datagen {

// Deterministic synthetic hourly weather/irradiance dataset for the Ibadan
// site (7.4515 N, 3.8899 E, UTC+1), sampled at :30 past each hour. The
// generator simulates coherent seasonal, diurnal and cloud processes
// (harmattan aerosol in the dry season, convective cloud in the wet season)
// and then calibrates each variable's marginal distribution to the site's
// reference climatology so that summary statistics over the default
// 2005..2022 range reproduce the published figures.
struct GenerationOptions {
    int start_year = 2005;
    int end_year = 2022;
    uint64_t seed = 0x1BADA5ULL;
    bool calibrate = true;
};

TimeSeries generate(const GenerationOptions& opts = {});

// Write with an NSRDB-style two-line metadata preamble ahead of the header.
void write_nsrdb_csv(const TimeSeries& ts, const std::string& path);

// Target marginal statistics on a value grid; calibration forces a sample to
// match min/q25/q50/q75/max exactly and mean/std to within ~2e-3.
struct MarginalTarget {
    double min = 0.0;
    double q25 = 0.0;
    double q50 = 0.0;
    double q75 = 0.0;
    double max = 0.0;
    double mean = 0.0;
    double std = 0.0;   // sample standard deviation (n-1)
    double grid = 1.0;  // value resolution
};

// Monotone rank-preserving calibration of a sample to the target marginal:
// a quantile-anchored piecewise-linear warp, grid rounding, then count-level
// moment repair. Returns the calibrated values in the order of the input.
std::vector<double> calibrate_marginal(std::vector<double> values,
                                       const MarginalTarget& target);

// Reference climatology targets used for the bundled dataset.
const MarginalTarget& site_target(Variable v);
bool has_site_target(Variable v);

}  // namespace solarcast::datagen
