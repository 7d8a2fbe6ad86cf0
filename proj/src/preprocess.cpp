#include "solarcast/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "solarcast/common.hpp"
#include "solarcast/rng.hpp"

namespace solarcast {

TimeSeries shift_timestamps(const TimeSeries& ts, int minutes) {
    TimeSeries out;
    out.source_id = ts.source_id;
    out.timezone_offset_hours = ts.timezone_offset_hours;
    out.records.reserve(ts.size());
    size_t off_grid = 0;
    for (const auto& rec : ts.records) {
        if (rec.minute != 30) ++off_grid;
        HourlyRecord shifted = rec;
        shifted.set_time(from_epoch_minutes(rec.epoch_minutes + minutes));
        out.records.push_back(shifted);
    }
    if (off_grid > 0) {
        log_warn("shift_timestamps: " + std::to_string(off_grid) +
                 " records were not at :30 before the shift");
    }
    return out;
}

TimeSeries filter_daytime(const TimeSeries& ts) {
    TimeSeries out;
    out.source_id = ts.source_id;
    out.timezone_offset_hours = ts.timezone_offset_hours;
    for (const auto& rec : ts.records) {
        if (is_daytime_hour(rec.hour)) out.records.push_back(rec);
    }
    return out;
}

void SplitSpec::check() const {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw UsageError("split: train_fraction must be in (0,1)");
    }
    for (int m : wet_months) {
        if (m < 1 || m > 12) {
            throw UsageError("split: wet month " + std::to_string(m) + " outside 1..12");
        }
    }
    if (wet_months.empty() || wet_months.size() == 12) {
        throw UsageError("split: wet months must be a proper subset of the year");
    }
}

Split split_holdout_and_train_test(const TimeSeries& ts, const SplitSpec& spec) {
    spec.check();
    if (ts.empty()) {
        throw DataError("split: empty series");
    }
    Split out;
    out.validation.source_id = ts.source_id;
    out.train.source_id = ts.source_id;
    out.test.source_id = ts.source_id;
    out.validation.timezone_offset_hours = ts.timezone_offset_hours;
    out.train.timezone_offset_hours = ts.timezone_offset_hours;
    out.test.timezone_offset_hours = ts.timezone_offset_hours;

    std::vector<size_t> pool;
    for (size_t i = 0; i < ts.records.size(); ++i) {
        if (ts.records[i].year == spec.validation_year) {
            out.validation.records.push_back(ts.records[i]);
        } else {
            pool.push_back(i);
        }
    }
    if (out.validation.empty()) {
        log_warn("split: validation year " + std::to_string(spec.validation_year) +
                 " absent from input; validation set is empty");
    }

    if (!spec.chronological) {
        Rng rng(spec.shuffle_seed);
        shuffle(pool, rng);
    }
    const size_t n_train =
        static_cast<size_t>(std::llround(spec.train_fraction * static_cast<double>(pool.size())));
    for (size_t k = 0; k < pool.size(); ++k) {
        (k < n_train ? out.train : out.test).records.push_back(ts.records[pool[k]]);
    }
    return out;
}

SeasonPartition season_partition(const TimeSeries& ts, const SplitSpec& spec) {
    spec.check();
    SeasonPartition out;
    out.wet.source_id = ts.source_id;
    out.dry.source_id = ts.source_id;
    out.wet.timezone_offset_hours = ts.timezone_offset_hours;
    out.dry.timezone_offset_hours = ts.timezone_offset_hours;
    for (const auto& rec : ts.records) {
        (spec.wet_months.count(rec.month) ? out.wet : out.dry).records.push_back(rec);
    }
    return out;
}

namespace {

void check_columns(const std::vector<std::vector<double>>& columns,
                   const std::vector<std::string>& names) {
    if (columns.empty() || columns.front().empty()) {
        throw DataError("scaler: empty fit data");
    }
    if (names.size() != columns.size()) {
        throw UsageError("scaler: column/name count mismatch");
    }
    for (const auto& col : columns) {
        if (col.size() != columns.front().size()) {
            throw DataError("scaler: ragged fit data");
        }
    }
}

void check_row(size_t expected, size_t got, const char* what) {
    if (expected != got) {
        throw UsageError(std::string(what) + ": expected " + std::to_string(expected) +
                         " values, got " + std::to_string(got));
    }
}

}  // namespace

void StandardScaler::fit(const std::vector<std::vector<double>>& columns,
                         const std::vector<std::string>& names) {
    check_columns(columns, names);
    means_.clear();
    stds_.clear();
    for (size_t c = 0; c < columns.size(); ++c) {
        const auto& col = columns[c];
        double mean = std::accumulate(col.begin(), col.end(), 0.0) /
                      static_cast<double>(col.size());
        double ss = 0.0;
        for (double x : col) ss += (x - mean) * (x - mean);
        double std = std::sqrt(ss / static_cast<double>(col.size()));
        if (std <= 0.0) {
            throw DataError("standard scaler: constant column '" + names[c] + "'");
        }
        means_.push_back(mean);
        stds_.push_back(std);
    }
    fitted_ = true;
}

std::vector<double> StandardScaler::apply(std::span<const double> row) const {
    if (!fitted_) throw UsageError("standard scaler: apply before fit");
    check_row(means_.size(), row.size(), "standard scaler apply");
    std::vector<double> out(row.size());
    for (size_t i = 0; i < row.size(); ++i) out[i] = (row[i] - means_[i]) / stds_[i];
    return out;
}

std::vector<double> StandardScaler::invert(std::span<const double> row) const {
    if (!fitted_) throw UsageError("standard scaler: invert before fit");
    check_row(means_.size(), row.size(), "standard scaler invert");
    std::vector<double> out(row.size());
    for (size_t i = 0; i < row.size(); ++i) out[i] = row[i] * stds_[i] + means_[i];
    return out;
}

void MinMaxScaler::fit(const std::vector<std::vector<double>>& columns,
                       const std::vector<std::string>& names) {
    check_columns(columns, names);
    mins_.clear();
    maxs_.clear();
    for (size_t c = 0; c < columns.size(); ++c) {
        auto [lo, hi] = std::minmax_element(columns[c].begin(), columns[c].end());
        if (!(*hi > *lo)) {
            throw DataError("min-max scaler: constant column '" + names[c] + "'");
        }
        mins_.push_back(*lo);
        maxs_.push_back(*hi);
    }
    fitted_ = true;
}

std::vector<double> MinMaxScaler::apply(std::span<const double> row) const {
    if (!fitted_) throw UsageError("min-max scaler: apply before fit");
    check_row(mins_.size(), row.size(), "min-max scaler apply");
    std::vector<double> out(row.size());
    for (size_t i = 0; i < row.size(); ++i) {
        out[i] = (row[i] - mins_[i]) / (maxs_[i] - mins_[i]);
    }
    return out;
}

std::vector<double> MinMaxScaler::invert(std::span<const double> row) const {
    if (!fitted_) throw UsageError("min-max scaler: invert before fit");
    check_row(mins_.size(), row.size(), "min-max scaler invert");
    std::vector<double> out(row.size());
    for (size_t i = 0; i < row.size(); ++i) {
        out[i] = row[i] * (maxs_[i] - mins_[i]) + mins_[i];
    }
    return out;
}

}  // namespace solarcast
