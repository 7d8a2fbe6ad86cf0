#pragma once

#include <set>
#include <string>
#include <vector>

#include "solarcast/forest.hpp"
#include "solarcast/metrics.hpp"
#include "solarcast/timeseries.hpp"

namespace solarcast {

enum class Season { annual, wet, dry };

const char* season_name(Season s);
Season season_from_name(const std::string& name);

// Feature layouts of the two stages. Stage 1 maps weather and calendar
// features to clear-sky irradiance; stage 2 appends the clear-sky components
// and the cloud type and maps to actual irradiance.
struct FeatureSchema {
    static const std::vector<std::string>& stage1_features();  // 10 features
    static const std::vector<std::string>& stage2_features();  // 14 features
    static const std::vector<std::string>& stage1_targets();
    static const std::vector<std::string>& stage2_targets();
};

// Stage-1 feature matrix for every record.
rf::FeatureMatrix make_stage1_features(const TimeSeries& ts);

// Stage-2 feature matrix over records with a cloud type, with the given
// clear-sky columns (observed at train time, predicted at inference).
// row_index maps matrix rows back to record indices.
rf::FeatureMatrix make_stage2_features(const TimeSeries& ts,
                                       std::span<const double> cs_ghi,
                                       std::span<const double> cs_dni,
                                       std::span<const double> cs_dhi,
                                       std::vector<size_t>& row_index);

struct TwoStagePipeline {
    Season season = Season::annual;
    std::set<int> season_months;  // empty for annual
    std::string split_manifest;   // provenance blob recorded at train time

    rf::ForestModel cs_ghi;
    rf::ForestModel cs_dni;
    rf::ForestModel cs_dhi;
    rf::ForestModel ghi;
    rf::ForestModel dni;
    rf::ForestModel dhi;
};

// Train the six forests. Stage 2 trains on observed clear-sky inputs
// (teacher forcing) over rows with a cloud type; rows without one stay in
// stage-1 training only.
TwoStagePipeline train_pipeline(const TimeSeries& train_data, Season season,
                                const std::set<int>& season_months,
                                const rf::ForestHyperParams& params, int n_threads = 0);

struct PredictionTable {
    std::vector<int64_t> epoch_minutes;
    std::vector<double> cs_ghi, cs_dni, cs_dhi;
    std::vector<double> ghi, dni, dhi;  // NaN where cloud type is missing

    size_t size() const { return epoch_minutes.size(); }
};

// Two-stage inference: stage-2 inputs are the stage-1 predictions, never the
// observed clear-sky columns. All outputs are clipped at zero.
PredictionTable predict(const TwoStagePipeline& pipeline, const TimeSeries& ts);

struct EvaluationResult {
    metrics::MetricsReport report;          // two-stage inference
    metrics::MetricsReport teacher_forced;  // stage 2 fed observed clear-sky
    size_t n_records = 0;
};

// Metrics over the daytime records of an evaluation set. A seasonal pipeline
// refuses records outside its months unless forced. MASE is computed on the
// series reordered by timestamp.
EvaluationResult evaluate(const TwoStagePipeline& pipeline, const TimeSeries& eval_data,
                          bool force = false);

struct PersistenceBaseline {
    std::vector<int64_t> epoch_minutes;
    std::vector<double> actual;
    std::vector<double> forecast;
};

// Naive forecast: each daytime record predicted by the previous daytime
// record of the same day; the first daytime record of each day is not scored.
PersistenceBaseline persistence_baseline(const TimeSeries& ts, Variable target);

void save_pipeline(const TwoStagePipeline& pipeline, const std::string& path);
TwoStagePipeline load_pipeline(const std::string& path);

}  // namespace solarcast
