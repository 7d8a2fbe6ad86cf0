#include "solarcast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>

#include "solarcast/common.hpp"
#include "solarcast/preprocess.hpp"

namespace solarcast {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

uint64_t mix_seed(uint64_t seed, uint64_t role) {
    uint64_t z = seed ^ (0x9e3779b97f4a7c15ULL * (role + 0x51ULL));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

const char* season_name(Season s) {
    switch (s) {
        case Season::annual: return "annual";
        case Season::wet: return "wet";
        case Season::dry: return "dry";
    }
    return "?";
}

Season season_from_name(const std::string& name) {
    if (name == "annual") return Season::annual;
    if (name == "wet") return Season::wet;
    if (name == "dry") return Season::dry;
    throw UsageError("unknown season '" + name + "' (annual|wet|dry)");
}

const std::vector<std::string>& FeatureSchema::stage1_features() {
    static const std::vector<std::string> names = {
        "month", "day", "hour", "precipitable_water", "dew_point",
        "relative_humidity", "pressure", "temperature", "wind_speed", "wind_direction"};
    return names;
}

const std::vector<std::string>& FeatureSchema::stage2_features() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v = stage1_features();
        v.insert(v.end(), {"clearsky_ghi", "clearsky_dni", "clearsky_dhi", "cloud_type"});
        return v;
    }();
    return names;
}

const std::vector<std::string>& FeatureSchema::stage1_targets() {
    static const std::vector<std::string> names = {"clearsky_ghi", "clearsky_dni",
                                                   "clearsky_dhi"};
    return names;
}

const std::vector<std::string>& FeatureSchema::stage2_targets() {
    static const std::vector<std::string> names = {"ghi", "dni", "dhi"};
    return names;
}

rf::FeatureMatrix make_stage1_features(const TimeSeries& ts) {
    rf::FeatureMatrix x;
    x.names = FeatureSchema::stage1_features();
    x.columns.assign(x.names.size(), {});
    for (auto& col : x.columns) col.reserve(ts.size());
    for (const auto& r : ts.records) {
        x.columns[0].push_back(r.month);
        x.columns[1].push_back(r.day);
        x.columns[2].push_back(r.hour);
        x.columns[3].push_back(r.precipitable_water);
        x.columns[4].push_back(r.dew_point);
        x.columns[5].push_back(r.relative_humidity);
        x.columns[6].push_back(r.pressure);
        x.columns[7].push_back(r.temperature);
        x.columns[8].push_back(r.wind_speed);
        x.columns[9].push_back(r.wind_direction);
    }
    return x;
}

rf::FeatureMatrix make_stage2_features(const TimeSeries& ts,
                                       std::span<const double> cs_ghi,
                                       std::span<const double> cs_dni,
                                       std::span<const double> cs_dhi,
                                       std::vector<size_t>& row_index) {
    if (cs_ghi.size() != ts.size() || cs_dni.size() != ts.size() || cs_dhi.size() != ts.size()) {
        throw DataError("stage-2 features: clear-sky column length mismatch");
    }
    rf::FeatureMatrix x;
    x.names = FeatureSchema::stage2_features();
    x.columns.assign(x.names.size(), {});
    row_index.clear();
    for (size_t i = 0; i < ts.records.size(); ++i) {
        const auto& r = ts.records[i];
        if (!r.cloud_type) continue;
        row_index.push_back(i);
        x.columns[0].push_back(r.month);
        x.columns[1].push_back(r.day);
        x.columns[2].push_back(r.hour);
        x.columns[3].push_back(r.precipitable_water);
        x.columns[4].push_back(r.dew_point);
        x.columns[5].push_back(r.relative_humidity);
        x.columns[6].push_back(r.pressure);
        x.columns[7].push_back(r.temperature);
        x.columns[8].push_back(r.wind_speed);
        x.columns[9].push_back(r.wind_direction);
        x.columns[10].push_back(cs_ghi[i]);
        x.columns[11].push_back(cs_dni[i]);
        x.columns[12].push_back(cs_dhi[i]);
        x.columns[13].push_back(static_cast<double>(*r.cloud_type));
    }
    return x;
}

TwoStagePipeline train_pipeline(const TimeSeries& train_data, Season season,
                                const std::set<int>& season_months,
                                const rf::ForestHyperParams& params, int n_threads) {
    if (train_data.empty()) {
        throw DataError("train: empty training slice for season " +
                        std::string(season_name(season)));
    }
    TwoStagePipeline p;
    p.season = season;
    p.season_months = season == Season::annual ? std::set<int>{} : season_months;

    const rf::FeatureMatrix x1 = make_stage1_features(train_data);
    std::vector<double> y_cs_ghi, y_cs_dni, y_cs_dhi;
    y_cs_ghi.reserve(train_data.size());
    y_cs_dni.reserve(train_data.size());
    y_cs_dhi.reserve(train_data.size());
    for (const auto& r : train_data.records) {
        y_cs_ghi.push_back(r.clearsky_ghi);
        y_cs_dni.push_back(r.clearsky_dni);
        y_cs_dhi.push_back(r.clearsky_dhi);
    }

    // Teacher forcing: stage 2 sees the observed clear-sky columns in training.
    std::vector<size_t> rows2;
    const rf::FeatureMatrix x2 =
        make_stage2_features(train_data, y_cs_ghi, y_cs_dni, y_cs_dhi, rows2);
    if (rows2.empty()) {
        throw DataError("train: no records with cloud type for stage-2 training");
    }
    std::vector<double> y_ghi, y_dni, y_dhi;
    y_ghi.reserve(rows2.size());
    y_dni.reserve(rows2.size());
    y_dhi.reserve(rows2.size());
    for (size_t i : rows2) {
        y_ghi.push_back(train_data.records[i].ghi);
        y_dni.push_back(train_data.records[i].dni);
        y_dhi.push_back(train_data.records[i].dhi);
    }

    auto with_seed = [&](uint64_t role) {
        rf::ForestHyperParams fp = params;
        fp.seed = mix_seed(params.seed, role);
        return fp;
    };
    p.cs_ghi = rf::fit(x1, y_cs_ghi, with_seed(0), n_threads);
    p.cs_dni = rf::fit(x1, y_cs_dni, with_seed(1), n_threads);
    p.cs_dhi = rf::fit(x1, y_cs_dhi, with_seed(2), n_threads);
    p.ghi = rf::fit(x2, y_ghi, with_seed(3), n_threads);
    p.dni = rf::fit(x2, y_dni, with_seed(4), n_threads);
    p.dhi = rf::fit(x2, y_dhi, with_seed(5), n_threads);
    return p;
}

PredictionTable predict(const TwoStagePipeline& pipeline, const TimeSeries& ts) {
    PredictionTable out;
    out.epoch_minutes.reserve(ts.size());
    for (const auto& r : ts.records) out.epoch_minutes.push_back(r.epoch_minutes);

    const rf::FeatureMatrix x1 = make_stage1_features(ts);
    out.cs_ghi = pipeline.cs_ghi.predict(x1);
    out.cs_dni = pipeline.cs_dni.predict(x1);
    out.cs_dhi = pipeline.cs_dhi.predict(x1);
    for (auto* col : {&out.cs_ghi, &out.cs_dni, &out.cs_dhi}) {
        for (double& v : *col) v = std::max(v, 0.0);
    }

    std::vector<size_t> rows2;
    const rf::FeatureMatrix x2 =
        make_stage2_features(ts, out.cs_ghi, out.cs_dni, out.cs_dhi, rows2);
    out.ghi.assign(ts.size(), kNaN);
    out.dni.assign(ts.size(), kNaN);
    out.dhi.assign(ts.size(), kNaN);
    if (!rows2.empty()) {
        const std::vector<double> ghi2 = pipeline.ghi.predict(x2);
        const std::vector<double> dni2 = pipeline.dni.predict(x2);
        const std::vector<double> dhi2 = pipeline.dhi.predict(x2);
        for (size_t k = 0; k < rows2.size(); ++k) {
            out.ghi[rows2[k]] = std::max(ghi2[k], 0.0);
            out.dni[rows2[k]] = std::max(dni2[k], 0.0);
            out.dhi[rows2[k]] = std::max(dhi2[k], 0.0);
        }
    }
    return out;
}

namespace {

metrics::TargetMetrics score_target(const std::string& name,
                                    std::vector<std::pair<int64_t, size_t>>& order,
                                    std::span<const double> y,
                                    std::span<const double> yhat) {
    metrics::TargetMetrics row;
    row.target = name;
    row.rmse = metrics::rmse(y, yhat);
    row.mae = metrics::mae(y, yhat);
    row.nrmse = metrics::nrmse(y, yhat);
    row.nrmse_rating = metrics::classify_nrmse(row.nrmse);

    // MASE needs chronological order; the shuffled split destroyed it.
    std::sort(order.begin(), order.end());
    std::vector<double> y_sorted(y.size()), yhat_sorted(y.size());
    for (size_t k = 0; k < order.size(); ++k) {
        y_sorted[k] = y[order[k].second];
        yhat_sorted[k] = yhat[order[k].second];
    }
    row.mase = metrics::mase(y_sorted, yhat_sorted);
    return row;
}

}  // namespace

EvaluationResult evaluate(const TwoStagePipeline& pipeline, const TimeSeries& eval_data,
                          bool force) {
    TimeSeries day = filter_daytime(eval_data);
    if (day.empty()) {
        throw DataError("evaluate: no daytime records in evaluation set");
    }
    if (!pipeline.season_months.empty() && !force) {
        for (const auto& r : day.records) {
            if (!pipeline.season_months.count(r.month)) {
                throw UsageError(std::string("evaluate: record month ") +
                                 std::to_string(r.month) + " outside the " +
                                 season_name(pipeline.season) +
                                 "-trained pipeline's months (use force to override)");
            }
        }
    }

    EvaluationResult result;
    result.n_records = day.size();

    const PredictionTable pred = predict(pipeline, day);

    // Teacher-forced variant: stage 2 fed the observed clear-sky columns.
    std::vector<double> obs_cs_ghi, obs_cs_dni, obs_cs_dhi;
    for (const auto& r : day.records) {
        obs_cs_ghi.push_back(r.clearsky_ghi);
        obs_cs_dni.push_back(r.clearsky_dni);
        obs_cs_dhi.push_back(r.clearsky_dhi);
    }
    std::vector<size_t> rows2;
    const rf::FeatureMatrix x2_obs =
        make_stage2_features(day, obs_cs_ghi, obs_cs_dni, obs_cs_dhi, rows2);

    struct TargetSpec {
        std::string name;
        Variable var;
        const std::vector<double>* predictions;
    };
    const TargetSpec stage1_specs[] = {
        {"clearsky_dhi", Variable::clearsky_dhi, &pred.cs_dhi},
        {"clearsky_dni", Variable::clearsky_dni, &pred.cs_dni},
        {"clearsky_ghi", Variable::clearsky_ghi, &pred.cs_ghi},
    };
    for (const auto& spec : stage1_specs) {
        std::vector<double> y, yhat;
        std::vector<std::pair<int64_t, size_t>> order;
        for (size_t i = 0; i < day.records.size(); ++i) {
            y.push_back(*variable_value(day.records[i], spec.var));
            yhat.push_back((*spec.predictions)[i]);
            order.emplace_back(day.records[i].epoch_minutes, y.size() - 1);
        }
        result.report.rows.push_back(score_target(spec.name, order, y, yhat));
        result.teacher_forced.rows.push_back(result.report.rows.back());
    }

    const TargetSpec stage2_specs[] = {
        {"dhi", Variable::dhi, &pred.dhi},
        {"dni", Variable::dni, &pred.dni},
        {"ghi", Variable::ghi, &pred.ghi},
    };
    const rf::ForestModel* stage2_models[] = {&pipeline.dhi, &pipeline.dni, &pipeline.ghi};
    for (size_t s = 0; s < 3; ++s) {
        const auto& spec = stage2_specs[s];
        std::vector<double> y, yhat;
        std::vector<std::pair<int64_t, size_t>> order;
        for (size_t i = 0; i < day.records.size(); ++i) {
            if (std::isnan((*spec.predictions)[i])) continue;
            y.push_back(*variable_value(day.records[i], spec.var));
            yhat.push_back((*spec.predictions)[i]);
            order.emplace_back(day.records[i].epoch_minutes, y.size() - 1);
        }
        if (y.empty()) {
            throw DataError("evaluate: no records with cloud type for target " + spec.name);
        }
        result.report.rows.push_back(score_target(spec.name, order, y, yhat));

        std::vector<double> yhat_tf = stage2_models[s]->predict(x2_obs);
        for (double& v : yhat_tf) v = std::max(v, 0.0);
        std::vector<double> y_tf;
        std::vector<std::pair<int64_t, size_t>> order_tf;
        for (size_t k = 0; k < rows2.size(); ++k) {
            y_tf.push_back(*variable_value(day.records[rows2[k]], spec.var));
            order_tf.emplace_back(day.records[rows2[k]].epoch_minutes, k);
        }
        result.teacher_forced.rows.push_back(score_target(spec.name, order_tf, y_tf, yhat_tf));
    }
    // Keep Tables 4-6 row order: clearsky DHI/DNI/GHI then DHI/DNI/GHI.
    return result;
}

PersistenceBaseline persistence_baseline(const TimeSeries& ts, Variable target) {
    PersistenceBaseline out;
    int64_t prev_day = INT64_MIN;
    double prev_value = 0.0;
    bool have_prev = false;
    for (const auto& r : ts.records) {
        if (!is_daytime_hour(r.hour)) continue;
        const int64_t day = r.epoch_minutes >= 0 ? r.epoch_minutes / 1440
                                                 : (r.epoch_minutes - 1439) / 1440;
        auto value = variable_value(r, target);
        if (!value) continue;
        if (day != prev_day) {
            prev_day = day;
            prev_value = *value;
            have_prev = true;
            continue;  // first daytime record of the day is not scored
        }
        if (have_prev) {
            out.epoch_minutes.push_back(r.epoch_minutes);
            out.actual.push_back(*value);
            out.forecast.push_back(prev_value);
        }
        prev_value = *value;
    }
    return out;
}

namespace {

constexpr uint32_t kPipelineMagic = 0x5343504C;  // "SCPL"
constexpr uint16_t kPipelineVersion = 1;

template <typename T>
void put(std::string& out, const T& v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <typename T>
T get(const std::string& data, size_t& offset) {
    if (offset + sizeof(T) > data.size()) throw DataError("pipeline file truncated");
    T v;
    std::memcpy(&v, data.data() + offset, sizeof(T));
    offset += sizeof(T);
    return v;
}

}  // namespace

void save_pipeline(const TwoStagePipeline& pipeline, const std::string& path) {
    std::string buf;
    put(buf, kPipelineMagic);
    put(buf, kPipelineVersion);
    put<uint8_t>(buf, static_cast<uint8_t>(pipeline.season));
    put<uint32_t>(buf, static_cast<uint32_t>(pipeline.season_months.size()));
    for (int m : pipeline.season_months) put<int32_t>(buf, m);
    put<uint32_t>(buf, static_cast<uint32_t>(pipeline.split_manifest.size()));
    buf.append(pipeline.split_manifest);
    for (const auto* model : {&pipeline.cs_ghi, &pipeline.cs_dni, &pipeline.cs_dhi,
                              &pipeline.ghi, &pipeline.dni, &pipeline.dhi}) {
        rf::write_forest(*model, buf);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open pipeline file for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

TwoStagePipeline load_pipeline(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open pipeline model: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    size_t offset = 0;
    if (get<uint32_t>(data, offset) != kPipelineMagic) {
        throw DataError(path + " is not a pipeline model file");
    }
    if (get<uint16_t>(data, offset) != kPipelineVersion) {
        throw DataError("unsupported pipeline model version");
    }
    TwoStagePipeline p;
    p.season = static_cast<Season>(get<uint8_t>(data, offset));
    const uint32_t n_months = get<uint32_t>(data, offset);
    for (uint32_t i = 0; i < n_months; ++i) {
        p.season_months.insert(get<int32_t>(data, offset));
    }
    const uint32_t manifest_len = get<uint32_t>(data, offset);
    if (offset + manifest_len > data.size()) throw DataError("pipeline file truncated");
    p.split_manifest = data.substr(offset, manifest_len);
    offset += manifest_len;
    for (auto* model : {&p.cs_ghi, &p.cs_dni, &p.cs_dhi, &p.ghi, &p.dni, &p.dhi}) {
        *model = rf::read_forest(data, offset);
    }
    return p;
}

}  // namespace solarcast
