#pragma once

#include <string>
#include <vector>

#include "solarcast/timeseries.hpp"

namespace solarcast::eda {

struct CorrelationMatrix {
    std::vector<std::string> variables;
    std::vector<std::vector<double>> coefficients;  // NaN where undefined
    std::vector<std::string> undefined_variables;   // constant columns

    double at(const std::string& a, const std::string& b) const;
};

// Pairwise Pearson correlations over the numeric record variables. Records
// missing a value (absent cloud type) are skipped pairwise. Constant columns
// produce flagged NaN entries rather than silent zeros.
CorrelationMatrix correlation_matrix(const TimeSeries& ts);

// Long-format CSV: var_a,var_b,coef.
std::string to_csv(const CorrelationMatrix& m);

struct MonthHourPivot {
    std::string variable;
    double mean[12][24];
    bool present[12][24];
};

// Cell (m,h) holds the mean of the variable over records in month m+1 and
// hour h; cells with no records are marked absent.
MonthHourPivot month_hour_pivot(const TimeSeries& ts, Variable variable);

// Long-format CSV: month,hour,mean (absent cells emit an empty mean).
std::string to_csv(const MonthHourPivot& pivot);

}  // namespace solarcast::eda
