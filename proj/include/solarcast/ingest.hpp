#pragma once

#include <span>
#include <string>
#include <vector>

#include "solarcast/timeseries.hpp"

namespace solarcast {

enum class HeaderMode {
    auto_detect,  // sniff metadata lines ahead of the column header
    plain,        // first line is the column header
    nsrdb,        // NSRDB export: metadata name/value lines, then the header
};

// Parse a CSV of hourly records. Mandatory columns are the Table-1 schema of
// the input data (Minute is optional and defaults to 0); unknown extra
// columns are ignored and logged. Rows come back sorted chronologically.
TimeSeries parse_csv(const std::string& path, HeaderMode mode = HeaderMode::auto_detect);

// Same, from an in-memory buffer (used by tests and the bindings).
TimeSeries parse_csv_text(const std::string& text, HeaderMode mode = HeaderMode::auto_detect,
                          const std::string& source_id = "<memory>");

// Write a TimeSeries back out as a plain-header CSV. parse_csv of the result
// reproduces the input exactly.
void write_csv(const TimeSeries& ts, const std::string& path);
std::string to_csv_text(const TimeSeries& ts);

struct SummaryRow {
    std::string variable;
    size_t count = 0;
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation (n-1)
    double min = 0.0;
    double q25 = 0.0;
    double median = 0.0;
    double q75 = 0.0;
    double max = 0.0;
};

struct SummaryTable {
    std::vector<SummaryRow> rows;

    const SummaryRow* find(const std::string& variable) const;
};

// Descriptive statistics over all records (no filtering). Quantiles use
// linear interpolation between closest ranks. cloud_type counts only present
// values.
SummaryTable summary_stats(const TimeSeries& ts);

// CSV with columns variable,count,mean,std,min,25%,50%,75%,max.
std::string to_csv(const SummaryTable& table);

// Linear-interpolation quantile of already sorted data, p in [0,1].
double quantile_sorted(std::span<const double> sorted, double p);

struct ValidationIssue {
    enum class Kind {
        out_of_range,
        duplicate_timestamp,
        non_monotone_timestamp,
    };
    Kind kind;
    size_t record_index = 0;
    std::string variable;
    double value = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    size_t missing_cloud_type_count = 0;
    size_t record_count = 0;

    bool clean() const { return issues.empty() && missing_cloud_type_count == 0; }
    size_t count(ValidationIssue::Kind kind) const;
};

// Report-only invariant check: range violations, missing cloud types,
// duplicate or non-monotone timestamps.
ValidationReport validate(const TimeSeries& ts);

}  // namespace solarcast
