#include "solarcast/eda.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "solarcast/common.hpp"

namespace solarcast::eda {

CorrelationMatrix correlation_matrix(const TimeSeries& ts) {
    if (ts.size() < 2) {
        throw DataError("correlation_matrix: need at least 2 records");
    }
    constexpr size_t n_vars = sizeof(kAllVariables) / sizeof(kAllVariables[0]);
    CorrelationMatrix m;
    m.variables.reserve(n_vars);
    for (Variable v : kAllVariables) m.variables.emplace_back(variable_name(v));
    m.coefficients.assign(n_vars, std::vector<double>(n_vars, 0.0));

    // Column extraction once; NaN marks missing values.
    std::vector<std::vector<double>> cols(n_vars);
    for (size_t a = 0; a < n_vars; ++a) {
        cols[a].resize(ts.size());
        for (size_t i = 0; i < ts.size(); ++i) {
            auto v = variable_value(ts.records[i], kAllVariables[a]);
            cols[a][i] = v ? *v : std::numeric_limits<double>::quiet_NaN();
        }
    }

    std::vector<bool> constant(n_vars, false);
    for (size_t a = 0; a < n_vars; ++a) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (double x : cols[a]) {
            if (std::isnan(x)) continue;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (!(hi > lo)) {
            constant[a] = true;
            m.undefined_variables.emplace_back(m.variables[a]);
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (size_t a = 0; a < n_vars; ++a) {
        for (size_t b = a; b < n_vars; ++b) {
            if (constant[a] || constant[b]) {
                m.coefficients[a][b] = m.coefficients[b][a] = nan;
                continue;
            }
            if (a == b) {
                m.coefficients[a][b] = 1.0;
                continue;
            }
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            size_t n = 0;
            for (size_t i = 0; i < ts.size(); ++i) {
                const double x = cols[a][i];
                const double y = cols[b][i];
                if (std::isnan(x) || std::isnan(y)) continue;
                sx += x;
                sy += y;
                sxx += x * x;
                syy += y * y;
                sxy += x * y;
                ++n;
            }
            if (n < 2) {
                m.coefficients[a][b] = m.coefficients[b][a] = nan;
                continue;
            }
            const double dn = static_cast<double>(n);
            const double cov = sxy - sx * sy / dn;
            const double vx = sxx - sx * sx / dn;
            const double vy = syy - sy * sy / dn;
            const double denom = std::sqrt(vx * vy);
            m.coefficients[a][b] = m.coefficients[b][a] = denom > 0.0 ? cov / denom : nan;
        }
    }
    return m;
}

double CorrelationMatrix::at(const std::string& a, const std::string& b) const {
    size_t ia = variables.size(), ib = variables.size();
    for (size_t i = 0; i < variables.size(); ++i) {
        if (variables[i] == a) ia = i;
        if (variables[i] == b) ib = i;
    }
    if (ia == variables.size() || ib == variables.size()) {
        throw UsageError("correlation matrix: unknown variable '" +
                         (ia == variables.size() ? a : b) + "'");
    }
    return coefficients[ia][ib];
}

std::string to_csv(const CorrelationMatrix& m) {
    std::ostringstream out;
    out << "var_a,var_b,coef\n";
    out.precision(10);
    for (size_t a = 0; a < m.variables.size(); ++a) {
        for (size_t b = 0; b < m.variables.size(); ++b) {
            out << m.variables[a] << ',' << m.variables[b] << ',';
            if (std::isnan(m.coefficients[a][b])) {
                out << "undefined";
            } else {
                out << m.coefficients[a][b];
            }
            out << '\n';
        }
    }
    return out.str();
}

MonthHourPivot month_hour_pivot(const TimeSeries& ts, Variable variable) {
    MonthHourPivot pivot{};
    pivot.variable = variable_name(variable);
    double sums[12][24] = {};
    size_t counts[12][24] = {};
    for (const auto& rec : ts.records) {
        if (rec.month < 1 || rec.month > 12 || rec.hour < 0 || rec.hour > 23) continue;
        auto v = variable_value(rec, variable);
        if (!v) continue;
        sums[rec.month - 1][rec.hour] += *v;
        counts[rec.month - 1][rec.hour] += 1;
    }
    for (int mth = 0; mth < 12; ++mth) {
        for (int h = 0; h < 24; ++h) {
            pivot.present[mth][h] = counts[mth][h] > 0;
            pivot.mean[mth][h] =
                counts[mth][h] > 0 ? sums[mth][h] / static_cast<double>(counts[mth][h]) : 0.0;
        }
    }
    return pivot;
}

std::string to_csv(const MonthHourPivot& pivot) {
    std::ostringstream out;
    out << "month,hour,mean\n";
    out.precision(10);
    for (int mth = 0; mth < 12; ++mth) {
        for (int h = 0; h < 24; ++h) {
            out << (mth + 1) << ',' << h << ',';
            if (pivot.present[mth][h]) out << pivot.mean[mth][h];
            out << '\n';
        }
    }
    return out.str();
}

}  // namespace solarcast::eda
