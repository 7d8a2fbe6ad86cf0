#include "solarcast/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "solarcast/common.hpp"

namespace solarcast {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    // Strip CR from files with Windows line endings and surrounding spaces.
    for (auto& f : fields) {
        while (!f.empty() && (f.back() == '\r' || f.back() == ' ' || f.back() == '\t')) {
            f.pop_back();
        }
        size_t i = 0;
        while (i < f.size() && (f[i] == ' ' || f[i] == '\t')) ++i;
        f.erase(0, i);
    }
    return fields;
}

bool is_blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](unsigned char c) { return std::isspace(c) != 0; });
}

bool parse_double(const std::string& s, double& out) {
    const char* begin = s.data();
    const char* end = begin + s.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

bool is_missing_token(const std::string& s) {
    return s.empty() || s == "NaN" || s == "nan" || s == "NA" || s == "N/A";
}

// A line is the column header if most of its fields name known variables.
size_t header_match_count(const std::vector<std::string>& fields) {
    size_t hits = 0;
    for (const auto& f : fields) {
        if (variable_from_name(f)) ++hits;
    }
    return hits;
}

constexpr Variable kMandatoryColumns[] = {
    Variable::year,          Variable::month,
    Variable::day,           Variable::hour,
    Variable::solar_zenith_angle, Variable::surface_albedo,
    Variable::precipitable_water, Variable::clearsky_dhi,
    Variable::clearsky_dni,  Variable::clearsky_ghi,
    Variable::cloud_type,    Variable::dew_point,
    Variable::relative_humidity, Variable::pressure,
    Variable::dhi,           Variable::dni,
    Variable::fill_flag,     Variable::ghi,
    Variable::temperature,   Variable::wind_direction,
    Variable::wind_speed,
};

TimeSeries parse_lines(const std::vector<std::string>& lines, HeaderMode mode,
                       const std::string& source_id) {
    if (lines.empty()) {
        throw DataError(source_id + ": empty file");
    }

    // Locate the header line. plain: line 1. nsrdb/auto: first line within the
    // leading few whose fields mostly name known columns.
    size_t header_index = 0;
    if (mode == HeaderMode::plain) {
        header_index = 0;
    } else {
        const size_t scan_limit = std::min<size_t>(lines.size(), 5);
        bool found = false;
        for (size_t i = 0; i < scan_limit; ++i) {
            auto fields = split_line(lines[i]);
            if (header_match_count(fields) >= 8) {
                header_index = i;
                found = true;
                break;
            }
        }
        if (!found) {
            if (mode == HeaderMode::nsrdb) {
                throw DataError(source_id + ": no column header found after metadata lines");
            }
            header_index = 0;  // fall through; the column check reports specifics
        }
        for (size_t i = 0; i < header_index; ++i) {
            log_debug(source_id + ": skipping metadata line " + std::to_string(i + 1));
        }
    }

    const auto header = split_line(lines[header_index]);
    std::vector<std::optional<Variable>> column_vars(header.size());
    bool have[sizeof(kAllVariables) / sizeof(kAllVariables[0])] = {};
    for (size_t c = 0; c < header.size(); ++c) {
        auto v = variable_from_name(header[c]);
        column_vars[c] = v;
        if (v) {
            have[static_cast<size_t>(*v)] = true;
        } else if (!is_blank(header[c])) {
            log_info(source_id + ": ignoring unknown column '" + header[c] + "'");
        }
    }
    for (Variable v : kMandatoryColumns) {
        if (!have[static_cast<size_t>(v)]) {
            throw DataError(source_id + ": missing mandatory column '" +
                            variable_name(v) + "'");
        }
    }

    TimeSeries ts;
    ts.source_id = source_id;
    ts.records.reserve(lines.size() - header_index);
    for (size_t i = header_index + 1; i < lines.size(); ++i) {
        if (is_blank(lines[i])) continue;
        const auto fields = split_line(lines[i]);
        if (fields.size() != header.size()) {
            throw DataError(source_id + ":" + std::to_string(i + 1) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(fields.size()));
        }
        HourlyRecord rec;
        for (size_t c = 0; c < fields.size(); ++c) {
            if (!column_vars[c]) continue;
            const Variable v = *column_vars[c];
            if (v == Variable::cloud_type && is_missing_token(fields[c])) {
                rec.cloud_type = std::nullopt;
                continue;
            }
            double value;
            if (!parse_double(fields[c], value)) {
                throw DataError(source_id + ":" + std::to_string(i + 1) +
                                ": cannot parse value '" + fields[c] + "' in column '" +
                                variable_name(v) + "'");
            }
            set_variable_value(rec, v, value);
        }
        rec.epoch_minutes = to_epoch_minutes(rec.civil());
        ts.records.push_back(rec);
    }
    if (ts.records.empty()) {
        throw DataError(source_id + ": no data rows");
    }
    std::stable_sort(ts.records.begin(), ts.records.end(),
                     [](const HourlyRecord& a, const HourlyRecord& b) {
                         return a.epoch_minutes < b.epoch_minutes;
                     });
    return ts;
}

void append_value(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, ptr);
}

}  // namespace

TimeSeries parse_csv(const std::string& path, HeaderMode mode) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open file: " + path);
    }
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    while (!lines.empty() && is_blank(lines.back())) lines.pop_back();
    return parse_lines(lines, mode, path);
}

TimeSeries parse_csv_text(const std::string& text, HeaderMode mode,
                          const std::string& source_id) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    while (!lines.empty() && is_blank(lines.back())) lines.pop_back();
    return parse_lines(lines, mode, source_id);
}

std::string to_csv_text(const TimeSeries& ts) {
    std::string out;
    out.reserve(ts.records.size() * 128 + 256);
    bool first = true;
    for (Variable v : kAllVariables) {
        if (!first) out.push_back(',');
        out.append(variable_name(v));
        first = false;
    }
    out.push_back('\n');
    for (const auto& rec : ts.records) {
        first = true;
        for (Variable v : kAllVariables) {
            if (!first) out.push_back(',');
            first = false;
            auto value = variable_value(rec, v);
            if (!value) continue;  // absent cloud_type -> empty cell
            append_value(out, *value);
        }
        out.push_back('\n');
    }
    return out;
}

void write_csv(const TimeSeries& ts, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw DataError("cannot open file for writing: " + path);
    }
    out << to_csv_text(ts);
}

double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) {
        throw DataError("quantile of empty data");
    }
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    const size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

const SummaryRow* SummaryTable::find(const std::string& variable) const {
    for (const auto& row : rows) {
        if (row.variable == variable) return &row;
    }
    return nullptr;
}

SummaryTable summary_stats(const TimeSeries& ts) {
    if (ts.empty()) {
        throw DataError("summary_stats: empty series");
    }
    SummaryTable table;
    std::vector<double> values;
    values.reserve(ts.size());
    for (Variable v : kAllVariables) {
        values.clear();
        for (const auto& rec : ts.records) {
            if (auto x = variable_value(rec, v)) values.push_back(*x);
        }
        SummaryRow row;
        row.variable = variable_name(v);
        row.count = values.size();
        if (values.empty()) {
            table.rows.push_back(row);
            continue;
        }
        double sum = 0.0;
        for (double x : values) sum += x;
        row.mean = sum / static_cast<double>(values.size());
        double ss = 0.0;
        for (double x : values) {
            const double d = x - row.mean;
            ss += d * d;
        }
        row.std = values.size() > 1
                      ? std::sqrt(ss / static_cast<double>(values.size() - 1))
                      : 0.0;
        std::sort(values.begin(), values.end());
        row.min = values.front();
        row.max = values.back();
        row.q25 = quantile_sorted(values, 0.25);
        row.median = quantile_sorted(values, 0.50);
        row.q75 = quantile_sorted(values, 0.75);
        table.rows.push_back(row);
    }
    return table;
}

std::string to_csv(const SummaryTable& table) {
    std::ostringstream out;
    out << "variable,count,mean,std,min,25%,50%,75%,max\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const auto& row : table.rows) {
        out << row.variable << ',' << row.count << ',' << row.mean << ',' << row.std << ','
            << row.min << ',' << row.q25 << ',' << row.median << ',' << row.q75 << ','
            << row.max << '\n';
    }
    return out.str();
}

size_t ValidationReport::count(ValidationIssue::Kind kind) const {
    size_t n = 0;
    for (const auto& issue : issues) {
        if (issue.kind == kind) ++n;
    }
    return n;
}

ValidationReport validate(const TimeSeries& ts) {
    ValidationReport report;
    report.record_count = ts.size();

    auto flag_range = [&](size_t i, Variable v, double value, const char* bound) {
        ValidationIssue issue;
        issue.kind = ValidationIssue::Kind::out_of_range;
        issue.record_index = i;
        issue.variable = variable_name(v);
        issue.value = value;
        issue.message = std::string(variable_name(v)) + " = " + std::to_string(value) +
                        " outside " + bound;
        report.issues.push_back(issue);
    };

    for (size_t i = 0; i < ts.records.size(); ++i) {
        const auto& r = ts.records[i];
        if (r.month < 1 || r.month > 12) flag_range(i, Variable::month, r.month, "[1,12]");
        if (r.day < 1 || r.day > 31) flag_range(i, Variable::day, r.day, "[1,31]");
        if (r.hour < 0 || r.hour > 23) flag_range(i, Variable::hour, r.hour, "[0,23]");
        if (r.minute < 0 || r.minute > 59) flag_range(i, Variable::minute, r.minute, "[0,59]");
        if (r.solar_zenith_angle < 0.0 || r.solar_zenith_angle > 180.0) {
            flag_range(i, Variable::solar_zenith_angle, r.solar_zenith_angle, "[0,180]");
        }
        if (r.surface_albedo < 0.0 || r.surface_albedo > 1.0) {
            flag_range(i, Variable::surface_albedo, r.surface_albedo, "[0,1]");
        }
        if (r.precipitable_water < 0.0) {
            flag_range(i, Variable::precipitable_water, r.precipitable_water, "[0,inf)");
        }
        if (r.clearsky_dhi < 0.0) flag_range(i, Variable::clearsky_dhi, r.clearsky_dhi, "[0,inf)");
        if (r.clearsky_dni < 0.0) flag_range(i, Variable::clearsky_dni, r.clearsky_dni, "[0,inf)");
        if (r.clearsky_ghi < 0.0) flag_range(i, Variable::clearsky_ghi, r.clearsky_ghi, "[0,inf)");
        if (r.cloud_type) {
            if (*r.cloud_type < 0) flag_range(i, Variable::cloud_type, *r.cloud_type, "[0,inf)");
        } else {
            ++report.missing_cloud_type_count;
        }
        if (r.relative_humidity < 0.0 || r.relative_humidity > 100.0) {
            flag_range(i, Variable::relative_humidity, r.relative_humidity, "[0,100]");
        }
        if (r.dhi < 0.0) flag_range(i, Variable::dhi, r.dhi, "[0,inf)");
        if (r.dni < 0.0) flag_range(i, Variable::dni, r.dni, "[0,inf)");
        if (r.ghi < 0.0) flag_range(i, Variable::ghi, r.ghi, "[0,inf)");
        if (r.wind_direction < 0.0 || r.wind_direction > 360.0) {
            flag_range(i, Variable::wind_direction, r.wind_direction, "[0,360]");
        }
        if (r.wind_speed < 0.0) flag_range(i, Variable::wind_speed, r.wind_speed, "[0,inf)");

        if (i > 0) {
            const int64_t prev = ts.records[i - 1].epoch_minutes;
            if (r.epoch_minutes == prev) {
                ValidationIssue issue;
                issue.kind = ValidationIssue::Kind::duplicate_timestamp;
                issue.record_index = i;
                issue.message = "duplicate timestamp " + format_timestamp(r.civil());
                report.issues.push_back(issue);
            } else if (r.epoch_minutes < prev) {
                ValidationIssue issue;
                issue.kind = ValidationIssue::Kind::non_monotone_timestamp;
                issue.record_index = i;
                issue.message = "timestamp " + format_timestamp(r.civil()) +
                                " precedes its predecessor";
                report.issues.push_back(issue);
            }
        }
    }
    return report;
}

}  // namespace solarcast
