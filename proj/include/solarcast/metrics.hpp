#pragma once

#include <span>
#include <string>
#include <vector>

namespace solarcast::metrics {

// Forecast error metrics. All functions require equal-length, finite series;
// mase additionally requires the actual series in chronological order.

double rmse(std::span<const double> y, std::span<const double> yhat);
double mae(std::span<const double> y, std::span<const double> yhat);

// rmse divided by mean(y); throws if mean(y) == 0.
double nrmse(std::span<const double> y, std::span<const double> yhat);

// MAE of the forecast over the MAE of the one-step naive forecast. Note the
// 1/n vs 1/(n-1) normalizers; throws on constant y (zero denominator).
double mase(std::span<const double> y, std::span<const double> yhat);

enum class NrmseRating { excellent, good, fair, poor };

// Thresholds: <0.10 excellent, [0.10,0.20) good, [0.20,0.30) fair, >=0.30
// poor. Boundary values fall in the worse class.
NrmseRating classify_nrmse(double value);

const char* rating_name(NrmseRating r);

struct TargetMetrics {
    std::string target;
    double rmse = 0.0;
    double mae = 0.0;
    double nrmse = 0.0;
    NrmseRating nrmse_rating = NrmseRating::poor;
    double mase = 0.0;
};

struct MetricsReport {
    std::vector<TargetMetrics> rows;

    const TargetMetrics* find(const std::string& target) const;
};

// CSV with columns target,rmse,mae,nrmse,nrmse_rating,mase.
std::string to_csv(const MetricsReport& report);

}  // namespace solarcast::metrics
