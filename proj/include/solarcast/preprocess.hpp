#pragma once

#include <cstdint>
#include <span>
#include <set>
#include <string>
#include <vector>

#include "solarcast/timeseries.hpp"

namespace solarcast {

// Daytime window kept after the timestamp shift: hours 7..18 inclusive.
inline constexpr int kDaytimeFirstHour = 7;
inline constexpr int kDaytimeLastHour = 18;

inline bool is_daytime_hour(int hour) {
    return hour >= kDaytimeFirstHour && hour <= kDaytimeLastHour;
}

// Advance every timestamp by `minutes` (default +30, aligning :30 stamps to
// the full hour). Data values are untouched. Input stamps not at :30 are
// counted and logged, not rejected.
TimeSeries shift_timestamps(const TimeSeries& ts, int minutes = 30);

// Keep records with hour in [7,18]; expects already shifted timestamps.
TimeSeries filter_daytime(const TimeSeries& ts);

struct SplitSpec {
    int validation_year = 2022;
    double train_fraction = 0.8;
    uint64_t shuffle_seed = 42;
    std::set<int> wet_months = {5, 6, 7, 8, 9, 10};
    bool chronological = false;  // false: seeded shuffle; true: ordered blocks

    std::set<int> dry_months() const {
        std::set<int> dry;
        for (int m = 1; m <= 12; ++m) {
            if (!wet_months.count(m)) dry.insert(m);
        }
        return dry;
    }

    void check() const;
};

struct Split {
    TimeSeries validation;  // records of the validation year
    TimeSeries train;
    TimeSeries test;
};

// Isolate the validation year, then split the remainder train/test by a
// seeded shuffle (or chronologically when requested). Union of the three
// parts equals the input; intersections are empty.
Split split_holdout_and_train_test(const TimeSeries& ts, const SplitSpec& spec);

struct SeasonPartition {
    TimeSeries wet;
    TimeSeries dry;
};

SeasonPartition season_partition(const TimeSeries& ts, const SplitSpec& spec);

// z = (x - mu) / sigma per feature. Constant columns are rejected at fit.
class StandardScaler {
public:
    void fit(const std::vector<std::vector<double>>& columns,
             const std::vector<std::string>& names);
    std::vector<double> apply(std::span<const double> row) const;
    std::vector<double> invert(std::span<const double> row) const;
    bool fitted() const { return fitted_; }
    const std::vector<double>& means() const { return means_; }
    const std::vector<double>& stds() const { return stds_; }

private:
    std::vector<double> means_;
    std::vector<double> stds_;
    bool fitted_ = false;
};

// x' = (x - min) / (max - min) per target. Degenerate ranges are rejected.
class MinMaxScaler {
public:
    void fit(const std::vector<std::vector<double>>& columns,
             const std::vector<std::string>& names);
    std::vector<double> apply(std::span<const double> row) const;
    std::vector<double> invert(std::span<const double> row) const;
    bool fitted() const { return fitted_; }
    const std::vector<double>& mins() const { return mins_; }
    const std::vector<double>& maxs() const { return maxs_; }

private:
    std::vector<double> mins_;
    std::vector<double> maxs_;
    bool fitted_ = false;
};

}  // namespace solarcast
