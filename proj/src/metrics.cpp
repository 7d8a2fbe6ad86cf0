#include "solarcast/metrics.hpp"

#include <cmath>
#include <sstream>

#include "solarcast/common.hpp"

namespace solarcast::metrics {

namespace {

void check_input(std::span<const double> y, std::span<const double> yhat) {
    if (y.size() != yhat.size()) {
        throw DataError("metrics: series lengths differ (" + std::to_string(y.size()) +
                        " vs " + std::to_string(yhat.size()) + ")");
    }
    if (y.empty()) {
        throw DataError("metrics: empty series");
    }
    for (size_t i = 0; i < y.size(); ++i) {
        if (!std::isfinite(y[i]) || !std::isfinite(yhat[i])) {
            throw DataError("metrics: non-finite value at index " + std::to_string(i));
        }
    }
}

double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

}  // namespace

double rmse(std::span<const double> y, std::span<const double> yhat) {
    check_input(y, yhat);
    double ss = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - yhat[i];
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(y.size()));
}

double mae(std::span<const double> y, std::span<const double> yhat) {
    check_input(y, yhat);
    double s = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        s += std::abs(y[i] - yhat[i]);
    }
    return s / static_cast<double>(y.size());
}

double nrmse(std::span<const double> y, std::span<const double> yhat) {
    const double m = mean(y);
    if (m == 0.0) {
        throw DataError("nrmse: mean of actual series is zero; result undefined");
    }
    return rmse(y, yhat) / m;
}

double mase(std::span<const double> y, std::span<const double> yhat) {
    check_input(y, yhat);
    const size_t n = y.size();
    if (n < 2) {
        throw DataError("mase: need at least 2 points");
    }
    double naive_sum = 0.0;
    for (size_t t = 1; t < n; ++t) {
        naive_sum += std::abs(y[t] - y[t - 1]);
    }
    if (naive_sum == 0.0) {
        throw DataError("mase: actual series is constant; naive MAE is zero");
    }
    double fc_sum = 0.0;
    for (size_t t = 0; t < n; ++t) {
        fc_sum += std::abs(y[t] - yhat[t]);
    }
    const double fc_mae = fc_sum / static_cast<double>(n);
    const double naive_mae = naive_sum / static_cast<double>(n - 1);
    return fc_mae / naive_mae;
}

NrmseRating classify_nrmse(double value) {
    if (value < 0.0) {
        throw UsageError("classify_nrmse: negative value");
    }
    if (value < 0.10) return NrmseRating::excellent;
    if (value < 0.20) return NrmseRating::good;
    if (value < 0.30) return NrmseRating::fair;
    return NrmseRating::poor;
}

const char* rating_name(NrmseRating r) {
    switch (r) {
        case NrmseRating::excellent: return "Excellent";
        case NrmseRating::good: return "Good";
        case NrmseRating::fair: return "Fair";
        case NrmseRating::poor: return "Poor";
    }
    return "?";
}

const TargetMetrics* MetricsReport::find(const std::string& target) const {
    for (const auto& row : rows) {
        if (row.target == target) return &row;
    }
    return nullptr;
}

std::string to_csv(const MetricsReport& report) {
    std::ostringstream out;
    out << "target,rmse,mae,nrmse,nrmse_rating,mase\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const auto& row : report.rows) {
        out << row.target << ',' << row.rmse << ',' << row.mae << ',' << row.nrmse << ','
            << rating_name(row.nrmse_rating) << ',' << row.mase << '\n';
    }
    return out.str();
}

}  // namespace solarcast::metrics
