#include <doctest.h>

#include <cmath>
#include <vector>

#include "solarcast/common.hpp"
#include "solarcast/metrics.hpp"
#include "solarcast/rng.hpp"

using namespace solarcast;
namespace mt = solarcast::metrics;

namespace {

// Independent brute-force re-implementations used as the oracle; kept
// deliberately separate from the library code path.
double oracle_rmse(const std::vector<double>& y, const std::vector<double>& f) {
    double acc = 0.0;
    for (size_t i = 0; i < y.size(); ++i) acc += std::pow(y[i] - f[i], 2.0);
    return std::sqrt(acc / double(y.size()));
}

double oracle_mae(const std::vector<double>& y, const std::vector<double>& f) {
    double acc = 0.0;
    for (size_t i = 0; i < y.size(); ++i) acc += std::fabs(y[i] - f[i]);
    return acc / double(y.size());
}

double oracle_nrmse(const std::vector<double>& y, const std::vector<double>& f) {
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= double(y.size());
    return oracle_rmse(y, f) / mean;
}

double oracle_mase(const std::vector<double>& y, const std::vector<double>& f) {
    double num = 0.0;
    for (size_t t = 0; t < y.size(); ++t) num += std::fabs(y[t] - f[t]);
    num /= double(y.size());
    double den = 0.0;
    for (size_t t = 1; t < y.size(); ++t) den += std::fabs(y[t] - y[t - 1]);
    den /= double(y.size() - 1);
    return num / den;
}

}  // namespace

TEST_CASE("rmse basics") {
    const std::vector<double> y{1, 2, 3};
    const std::vector<double> f{1, 2, 5};
    CHECK(mt::rmse(y, y) == 0.0);
    CHECK(mt::rmse(y, f) == doctest::Approx(std::sqrt(4.0 / 3.0)));
    const std::vector<double> y1{0.0}, f1{3.0};
    CHECK(mt::rmse(y1, f1) == 3.0);
}

TEST_CASE("mae basics") {
    const std::vector<double> y{0, 0};
    const std::vector<double> f{1, -1};
    CHECK(mt::mae(y, y) == 0.0);
    CHECK(mt::mae(y, f) == doctest::Approx(1.0));
}

TEST_CASE("nrmse basics and errors") {
    // rmse 1 over mean 2.
    const std::vector<double> y{2, 2}, f{3, 1};
    CHECK(mt::nrmse(y, f) == doctest::Approx(0.5));
    const std::vector<double> zero_mean{1, -1};
    CHECK_THROWS_AS(mt::nrmse(zero_mean, zero_mean), DataError);
    const std::vector<double> a{1, 2}, b{1};
    CHECK_THROWS_AS(mt::rmse(a, b), DataError);
    const std::vector<double> empty;
    CHECK_THROWS_AS(mt::rmse(empty, empty), DataError);
    const std::vector<double> with_nan{1.0, std::nan("")}, fine{1.0, 2.0};
    CHECK_THROWS_AS(mt::rmse(with_nan, fine), DataError);
}

TEST_CASE("mase basics") {
    const std::vector<double> y{1, 3, 2, 5, 4};
    CHECK(mt::mase(y, y) == 0.0);
    const std::vector<double> constant{2, 2, 2}, ones{1, 1, 1};
    CHECK_THROWS_AS(mt::mase(constant, ones), DataError);
    const std::vector<double> single{1};
    CHECK_THROWS_AS(mt::mase(single, single), DataError);

    // Pure persistence forecast scored over t=2..n: the numerator and the
    // denominator share the same sum, so MASE = (n-1)/n.
    Rng rng(7);
    std::vector<double> series(50);
    for (double& v : series) v = rng.uniform(0.0, 100.0);
    std::vector<double> actual(series.begin() + 1, series.end());
    std::vector<double> naive(series.begin(), series.end() - 1);
    const double n = double(actual.size());
    CHECK(mt::mase(actual, naive) == doctest::Approx((n - 1.0) / n).epsilon(1e-12));
}

TEST_CASE("classify_nrmse bands") {
    using R = mt::NrmseRating;
    CHECK(mt::classify_nrmse(0.05) == R::excellent);
    CHECK(mt::classify_nrmse(0.10) == R::good);
    CHECK(mt::classify_nrmse(0.19) == R::good);
    CHECK(mt::classify_nrmse(0.20) == R::fair);
    CHECK(mt::classify_nrmse(0.22) == R::fair);
    CHECK(mt::classify_nrmse(0.30) == R::poor);
    CHECK(mt::classify_nrmse(0.33) == R::poor);
    CHECK_THROWS_AS(mt::classify_nrmse(-0.1), UsageError);
}

TEST_CASE("metrics match the brute-force oracle on random series") {
    Rng rng(20240601);
    for (int trial = 0; trial < 1000; ++trial) {
        const size_t n = 2 + rng.next_below(64);
        std::vector<double> y(n), f(n);
        for (size_t i = 0; i < n; ++i) {
            y[i] = rng.uniform(-100.0, 500.0);
            f[i] = y[i] + rng.normal(0.0, 25.0);
        }
        CHECK(mt::rmse(y, f) == doctest::Approx(oracle_rmse(y, f)).epsilon(1e-12));
        CHECK(mt::mae(y, f) == doctest::Approx(oracle_mae(y, f)).epsilon(1e-12));
        double mean = 0.0;
        for (double v : y) mean += v;
        if (mean != 0.0) {
            CHECK(mt::nrmse(y, f) == doctest::Approx(oracle_nrmse(y, f)).epsilon(1e-12));
        }
        bool constant = true;
        for (size_t i = 1; i < n; ++i) constant &= y[i] == y[0];
        if (!constant) {
            CHECK(mt::mase(y, f) == doctest::Approx(oracle_mase(y, f)).epsilon(1e-12));
        }
        // Cauchy-Schwarz: rmse >= mae.
        CHECK(mt::rmse(y, f) >= mt::mae(y, f) - 1e-12);
    }
}

TEST_CASE("scaling and translation behaviour") {
    Rng rng(99);
    std::vector<double> y(40), f(40);
    for (size_t i = 0; i < y.size(); ++i) {
        y[i] = rng.uniform(10.0, 200.0);
        f[i] = y[i] + rng.normal(0.0, 5.0);
    }
    const double r0 = mt::rmse(y, f), m0 = mt::mae(y, f), s0 = mt::mase(y, f),
                 n0 = mt::nrmse(y, f);

    // Adding a constant to both series changes neither rmse nor mae.
    std::vector<double> yc = y, fc = f;
    for (auto& v : yc) v += 37.0;
    for (auto& v : fc) v += 37.0;
    CHECK(mt::rmse(yc, fc) == doctest::Approx(r0).epsilon(1e-12));
    CHECK(mt::mae(yc, fc) == doctest::Approx(m0).epsilon(1e-12));

    // Scaling both series by k scales rmse/mae by k, leaves nrmse/mase alone.
    std::vector<double> yk = y, fk = f;
    for (auto& v : yk) v *= 3.5;
    for (auto& v : fk) v *= 3.5;
    CHECK(mt::rmse(yk, fk) == doctest::Approx(3.5 * r0).epsilon(1e-12));
    CHECK(mt::mae(yk, fk) == doctest::Approx(3.5 * m0).epsilon(1e-12));
    CHECK(mt::nrmse(yk, fk) == doctest::Approx(n0).epsilon(1e-12));
    CHECK(mt::mase(yk, fk) == doctest::Approx(s0).epsilon(1e-12));
}

TEST_CASE("report csv layout") {
    mt::MetricsReport report;
    report.rows.push_back({"ghi", 77.5, 41.4, 0.19, mt::classify_nrmse(0.19), 0.13});
    const std::string csv = mt::to_csv(report);
    CHECK(csv.find("target,rmse,mae,nrmse,nrmse_rating,mase") == 0);
    CHECK(csv.find("ghi,") != std::string::npos);
    CHECK(csv.find("Good") != std::string::npos);
    CHECK(report.find("ghi") != nullptr);
    CHECK(report.find("nope") == nullptr);
}
