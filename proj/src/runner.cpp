#include "solarcast/runner.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fcntl.h>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include <json.hpp>

#include "solarcast/common.hpp"
#include "solarcast/pv.hpp"

namespace solarcast {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string resolve_path(const std::string& base_dir, const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute() || base_dir.empty()) return p;
    return (fs::path(base_dir) / p).string();
}

uint64_t fnv1a(const std::string& data) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string format_timestamp_col(int64_t epoch_minutes) {
    return format_timestamp(from_epoch_minutes(epoch_minutes));
}

}  // namespace

std::string now_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc;
    gmtime_r(&tt, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open config: " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str(), fs::path(path).parent_path().string());
}

RunConfig RunConfig::from_json_text(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw UsageError(std::string("config: ") + e.what());
    }
    RunConfig c;
    const json data = j.value("data", json::object());
    c.input_csv = resolve_path(base_dir, data.value("input", ""));
    const std::string mode = data.value("header_mode", "auto");
    if (mode == "auto") {
        c.header_mode = HeaderMode::auto_detect;
    } else if (mode == "plain") {
        c.header_mode = HeaderMode::plain;
    } else if (mode == "nsrdb") {
        c.header_mode = HeaderMode::nsrdb;
    } else {
        throw UsageError("config: header_mode must be auto|plain|nsrdb");
    }

    const json split = j.value("split", json::object());
    if (!split.contains("seed")) {
        throw UsageError("config: split.seed is mandatory");
    }
    c.split.shuffle_seed = split.at("seed").get<uint64_t>();
    c.split.train_fraction = split.value("train_fraction", 0.8);
    c.split.validation_year = split.value("validation_year", 2022);
    c.split.chronological = split.value("chronological", false);
    if (split.contains("wet_months")) {
        c.split.wet_months.clear();
        for (int m : split.at("wet_months")) c.split.wet_months.insert(m);
    }
    c.split.check();

    const json forest = j.value("forest", json::object());
    c.forest.n_trees = forest.value("n_trees", 100);
    c.forest.max_depth = forest.value("max_depth", 0);
    c.forest.min_samples_leaf = forest.value("min_samples_leaf", 1);
    c.forest.min_samples_split = forest.value("min_samples_split", 2);
    c.forest.bootstrap = forest.value("bootstrap", true);
    c.forest.seed = c.split.shuffle_seed;
    const std::string mf = forest.value("max_features", "all");
    if (mf == "all") {
        c.forest.max_features = rf::MaxFeatures::all;
    } else if (mf == "sqrt") {
        c.forest.max_features = rf::MaxFeatures::sqrt_count;
    } else {
        c.forest.max_features = rf::MaxFeatures::fraction;
        c.forest.max_features_fraction = std::stod(mf);
    }
    c.forest.check();

    const json pv_cfg = j.value("pv", json::object());
    if (pv_cfg.contains("systems")) {
        for (const auto& s : pv_cfg.at("systems")) {
            c.system_specs.push_back(resolve_path(base_dir, s.get<std::string>()));
        }
    }
    c.output_dir = resolve_path(base_dir, j.value("output_dir", "out"));
    c.threads = j.value("threads", 0);
    return c;
}

std::string RunConfig::to_json_text() const {
    json j;
    j["data"]["input"] = input_csv;
    j["data"]["header_mode"] = header_mode == HeaderMode::plain
                                   ? "plain"
                                   : header_mode == HeaderMode::nsrdb ? "nsrdb" : "auto";
    j["split"]["seed"] = split.shuffle_seed;
    j["split"]["train_fraction"] = split.train_fraction;
    j["split"]["validation_year"] = split.validation_year;
    j["split"]["chronological"] = split.chronological;
    j["split"]["wet_months"] = split.wet_months;
    j["forest"]["n_trees"] = forest.n_trees;
    j["forest"]["max_depth"] = forest.max_depth;
    j["forest"]["min_samples_leaf"] = forest.min_samples_leaf;
    j["forest"]["min_samples_split"] = forest.min_samples_split;
    j["forest"]["bootstrap"] = forest.bootstrap;
    j["forest"]["max_features"] =
        forest.max_features == rf::MaxFeatures::all
            ? "all"
            : forest.max_features == rf::MaxFeatures::sqrt_count
                  ? "sqrt"
                  : std::to_string(forest.max_features_fraction);
    j["pv"]["systems"] = system_specs;
    j["output_dir"] = output_dir;
    j["threads"] = threads;
    return j.dump(2);
}

uint64_t RunConfig::config_hash() const { return fnv1a(to_json_text()); }

void RunConfig::check_paths() const {
    if (input_csv.empty()) {
        throw UsageError("config: data.input is required");
    }
    if (!fs::exists(input_csv)) {
        throw UsageError("config: input data not found: " + input_csv);
    }
    for (const auto& s : system_specs) {
        if (!fs::exists(s)) {
            throw UsageError("config: system spec not found: " + s);
        }
    }
}

DirectoryLock::DirectoryLock(const std::string& dir) {
    fs::create_directories(dir);
    lock_path_ = (fs::path(dir) / ".solarcast.lock").string();
    const int fd = ::open(lock_path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd < 0) {
        if (errno == EEXIST) {
            throw UsageError("output directory is locked by another run: " + lock_path_);
        }
        throw DataError("cannot create lockfile " + lock_path_ + ": " +
                        std::strerror(errno));
    }
    const std::string pid = std::to_string(::getpid()) + "\n";
    [[maybe_unused]] ssize_t rc = ::write(fd, pid.data(), pid.size());
    ::close(fd);
}

DirectoryLock::~DirectoryLock() {
    std::error_code ec;
    fs::remove(lock_path_, ec);
}

void write_artifact(const std::string& path, const std::string& content) {
    const std::string partial = path + ".partial";
    {
        std::ofstream out(partial, std::ios::binary);
        if (!out) {
            throw DataError("cannot open " + partial + " for writing");
        }
        out << content;
        if (!out) {
            throw DataError("failed writing " + partial);
        }
    }
    fs::rename(partial, path);
}

void write_manifest(const ManifestEntry& entry, const std::string& path) {
    json j;
    j["command"] = entry.command;
    char hash_hex[20];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(entry.config_hash));
    j["config_hash"] = hash_hex;
    j["version"] = entry.version;
    j["started"] = entry.started;
    j["finished"] = entry.finished;
    for (const auto& [k, v] : entry.row_counts) j["row_counts"][k] = v;
    j["outputs"] = entry.outputs;
    for (const auto& [k, v] : entry.metrics) j["metrics"][k] = v;
    write_artifact(path, j.dump(2) + "\n");
}

namespace {

struct StageContext {
    ManifestEntry& manifest;
    std::string out_dir;

    std::string emit(const std::string& name, const std::string& content) {
        const std::string path = (fs::path(out_dir) / name).string();
        write_artifact(path, content);
        manifest.outputs.push_back(path);
        return path;
    }
};

template <typename F>
auto run_stage(const char* name, F&& f) {
    try {
        return f();
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        throw DataError(std::string("stage ") + name + ": " + e.what());
    }
}

std::string predictions_csv(const PredictionTable& pred) {
    std::ostringstream out;
    out << "timestamp,pred_clearsky_ghi,pred_clearsky_dni,pred_clearsky_dhi,"
           "pred_ghi,pred_dni,pred_dhi\n";
    out.setf(std::ios::fixed);
    out.precision(3);
    for (size_t i = 0; i < pred.size(); ++i) {
        out << format_timestamp_col(pred.epoch_minutes[i]) << ',' << pred.cs_ghi[i] << ','
            << pred.cs_dni[i] << ',' << pred.cs_dhi[i] << ',';
        if (std::isnan(pred.ghi[i])) {
            out << ",,";
        } else {
            out << pred.ghi[i] << ',' << pred.dni[i] << ',' << pred.dhi[i];
        }
        out << '\n';
    }
    return out.str();
}

std::string daily_predictions_csv(const TimeSeries& actual, const PredictionTable& pred) {
    struct Acc {
        double a_ghi = 0, a_dni = 0, a_dhi = 0;
        double p_ghi = 0, p_dni = 0, p_dhi = 0;
        int n = 0;
    };
    std::map<int64_t, Acc> days;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (std::isnan(pred.ghi[i])) continue;
        const int64_t day = pred.epoch_minutes[i] / 1440;
        Acc& acc = days[day];
        acc.a_ghi += actual.records[i].ghi;
        acc.a_dni += actual.records[i].dni;
        acc.a_dhi += actual.records[i].dhi;
        acc.p_ghi += pred.ghi[i];
        acc.p_dni += pred.dni[i];
        acc.p_dhi += pred.dhi[i];
        acc.n += 1;
    }
    std::ostringstream out;
    out << "date,actual_ghi,pred_ghi,actual_dni,pred_dni,actual_dhi,pred_dhi\n";
    out.setf(std::ios::fixed);
    out.precision(3);
    for (const auto& [day, acc] : days) {
        const double n = acc.n;
        out << format_date(from_epoch_minutes(day * 1440)) << ',' << acc.a_ghi / n << ','
            << acc.p_ghi / n << ',' << acc.a_dni / n << ',' << acc.p_dni / n << ','
            << acc.a_dhi / n << ',' << acc.p_dhi / n << '\n';
    }
    return out.str();
}

std::string importance_csv(const TwoStagePipeline& pipeline) {
    const auto& names = FeatureSchema::stage2_features();
    const rf::ForestModel* models[] = {&pipeline.ghi, &pipeline.dni, &pipeline.dhi};
    const char* targets[] = {"ghi", "dni", "dhi"};
    std::ostringstream out;
    out << "target,feature,importance\n";
    out.precision(8);
    std::vector<double> avg(names.size(), 0.0);
    for (int t = 0; t < 3; ++t) {
        for (size_t f = 0; f < names.size(); ++f) {
            out << targets[t] << ',' << names[f] << ',' << models[t]->importances[f] << '\n';
            avg[f] += models[t]->importances[f] / 3.0;
        }
    }
    for (size_t f = 0; f < names.size(); ++f) {
        out << "average," << names[f] << ',' << avg[f] << '\n';
    }
    return out.str();
}

std::string hourly_sim_csv(const pv::EnergySimulation& sim) {
    std::ostringstream out;
    out << "timestamp,g_poa,cell_temp,p_dc,p_ac\n";
    out.setf(std::ios::fixed);
    out.precision(3);
    for (const auto& h : sim.hours) {
        out << format_timestamp_col(h.epoch_minutes) << ',' << h.g_poa << ',' << h.cell_temp
            << ',' << h.p_dc << ',' << h.p_ac << '\n';
    }
    return out.str();
}

std::string daily_energy_csv(const pv::EnergySimulation& sim) {
    std::ostringstream out;
    out << "date,energy_kwh\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const auto& d : sim.days) {
        out << format_date(d.date) << ',' << d.energy_kwh << '\n';
    }
    return out.str();
}

void record_metrics(ManifestEntry& manifest, const std::string& prefix,
                    const metrics::MetricsReport& report) {
    for (const auto& row : report.rows) {
        manifest.metrics.emplace_back(prefix + "." + row.target + ".rmse", row.rmse);
        manifest.metrics.emplace_back(prefix + "." + row.target + ".mae", row.mae);
        manifest.metrics.emplace_back(prefix + "." + row.target + ".nrmse", row.nrmse);
        manifest.metrics.emplace_back(prefix + "." + row.target + ".mase", row.mase);
    }
}

TimeSeries filter_months(const TimeSeries& ts, const std::set<int>& months) {
    TimeSeries out;
    out.source_id = ts.source_id;
    out.timezone_offset_hours = ts.timezone_offset_hours;
    for (const auto& r : ts.records) {
        if (months.count(r.month)) out.records.push_back(r);
    }
    return out;
}

pv::IrradianceSeries to_irradiance_series(const PredictionTable& pred) {
    pv::IrradianceSeries s;
    for (size_t i = 0; i < pred.size(); ++i) {
        if (std::isnan(pred.ghi[i])) continue;
        s.epoch_minutes.push_back(pred.epoch_minutes[i]);
        s.ghi.push_back(pred.ghi[i]);
        s.dni.push_back(pred.dni[i]);
        s.dhi.push_back(pred.dhi[i]);
    }
    return s;
}

std::string sanitize_name(const std::string& name) {
    std::string out;
    for (char c : name) {
        out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '-');
    }
    return out;
}

}  // namespace

ExperimentArtifacts run_full_experiment(const RunConfig& config) {
    config.check_paths();
    DirectoryLock lock(config.output_dir);
    fs::create_directories(fs::path(config.output_dir) / "splits");
    fs::create_directories(fs::path(config.output_dir) / "models");
    fs::create_directories(fs::path(config.output_dir) / "diagnostics");

    ManifestEntry manifest;
    manifest.command = "run";
    manifest.config_hash = config.config_hash();
    manifest.version = SOLARCAST_VERSION;
    manifest.started = now_iso8601();
    StageContext ctx{manifest, config.output_dir};
    ExperimentArtifacts artifacts;

    // Ingest + summary table.
    TimeSeries raw = run_stage("ingest", [&] {
        return parse_csv(config.input_csv, config.header_mode);
    });
    manifest.row_counts.emplace_back("input", static_cast<int64_t>(raw.size()));
    run_stage("summary", [&] {
        artifacts.files.push_back(ctx.emit("summary.csv", to_csv(summary_stats(raw))));
        return 0;
    });

    // Preprocess: shift, hold out the validation year, filter daytime, split.
    Split split = run_stage("preprocess", [&] {
        const TimeSeries shifted = shift_timestamps(raw);
        Split s = split_holdout_and_train_test(shifted, config.split);
        s.train = filter_daytime(s.train);
        s.test = filter_daytime(s.test);
        write_csv(s.train, (fs::path(config.output_dir) / "splits/train.csv").string());
        write_csv(s.test, (fs::path(config.output_dir) / "splits/test.csv").string());
        write_csv(s.validation,
                  (fs::path(config.output_dir) / "splits/validation.csv").string());
        return s;
    });
    manifest.row_counts.emplace_back("train", static_cast<int64_t>(split.train.size()));
    manifest.row_counts.emplace_back("test", static_cast<int64_t>(split.test.size()));
    manifest.row_counts.emplace_back("validation",
                                     static_cast<int64_t>(split.validation.size()));

    // Train and evaluate the three seasonal variants.
    struct SeasonPlan {
        Season season;
        std::string name;
    };
    const SeasonPlan plans[] = {{Season::annual, "annual"},
                                {Season::wet, "wet"},
                                {Season::dry, "dry"}};
    TwoStagePipeline annual_pipeline;
    for (const auto& plan : plans) {
        const std::set<int> months = plan.season == Season::wet
                                         ? config.split.wet_months
                                         : plan.season == Season::dry
                                               ? config.split.dry_months()
                                               : std::set<int>{};
        TwoStagePipeline pipeline = run_stage("train", [&] {
            const TimeSeries train_slice =
                plan.season == Season::annual ? split.train
                                              : filter_months(split.train, months);
            TwoStagePipeline p = train_pipeline(train_slice, plan.season, months,
                                                config.forest, config.threads);
            p.split_manifest = config.to_json_text();
            save_pipeline(p, (fs::path(config.output_dir) / "models" /
                              (plan.name + ".pipeline")).string());
            return p;
        });
        run_stage("evaluate", [&] {
            const TimeSeries test_slice =
                plan.season == Season::annual ? split.test
                                              : filter_months(split.test, months);
            const EvaluationResult result = evaluate(pipeline, test_slice);
            artifacts.files.push_back(
                ctx.emit("metrics_" + plan.name + ".csv", metrics::to_csv(result.report)));
            ctx.emit("diagnostics/metrics_" + plan.name + "_teacher_forced.csv",
                     metrics::to_csv(result.teacher_forced));
            record_metrics(manifest, plan.name, result.report);
            return 0;
        });
        if (plan.season == Season::annual) annual_pipeline = std::move(pipeline);
    }

    // Validation-year predictions (hourly + daily) from the annual pipeline.
    const TimeSeries validation_day = filter_daytime(split.validation);
    PredictionTable val_pred = run_stage("predict", [&] {
        if (validation_day.empty()) {
            throw DataError("validation year has no daytime records");
        }
        PredictionTable pred = predict(annual_pipeline, validation_day);
        artifacts.files.push_back(ctx.emit("predictions_2022.csv", predictions_csv(pred)));
        artifacts.files.push_back(ctx.emit("predictions_2022_daily.csv",
                                           daily_predictions_csv(validation_day, pred)));
        return pred;
    });
    run_stage("evaluate", [&] {
        const EvaluationResult val_result = evaluate(annual_pipeline, split.validation);
        ctx.emit("diagnostics/metrics_validation.csv", metrics::to_csv(val_result.report));
        record_metrics(manifest, "validation", val_result.report);
        return 0;
    });

    run_stage("report", [&] {
        artifacts.files.push_back(
            ctx.emit("feature_importance.csv", importance_csv(annual_pipeline)));
        return 0;
    });

    // Energy simulation for each configured system.
    const pv::IrradianceSeries irr = to_irradiance_series(val_pred);
    for (const auto& spec_path : config.system_specs) {
        run_stage("simulate", [&] {
            const pv::PvSystemSpec spec = pv::load_system_spec(spec_path);
            const pv::EnergySimulation sim =
                pv::simulate_energy(irr, validation_day, spec);
            const std::string tag = sanitize_name(spec.name);
            artifacts.files.push_back(
                ctx.emit("energy_" + tag + ".csv", daily_energy_csv(sim)));
            ctx.emit("diagnostics/pv_hourly_" + tag + ".csv", hourly_sim_csv(sim));
            return 0;
        });
    }

    manifest.finished = now_iso8601();
    write_manifest(manifest, (fs::path(config.output_dir) / "manifest.json").string());
    return artifacts;
}

ExperimentArtifacts regenerate_report(const RunConfig& config) {
    DirectoryLock lock(config.output_dir);
    const fs::path out_dir(config.output_dir);
    for (const char* required :
         {"splits/train.csv", "splits/test.csv", "splits/validation.csv",
          "models/annual.pipeline", "models/wet.pipeline", "models/dry.pipeline"}) {
        if (!fs::exists(out_dir / required)) {
            throw UsageError("report: missing cached artifact " +
                             (out_dir / required).string() + "; run the full experiment first");
        }
    }

    ManifestEntry manifest;
    manifest.command = "report";
    manifest.config_hash = config.config_hash();
    manifest.version = SOLARCAST_VERSION;
    manifest.started = now_iso8601();
    StageContext ctx{manifest, config.output_dir};
    ExperimentArtifacts artifacts;

    Split split;
    split.train = parse_csv((out_dir / "splits/train.csv").string(), HeaderMode::plain);
    split.test = parse_csv((out_dir / "splits/test.csv").string(), HeaderMode::plain);
    split.validation =
        parse_csv((out_dir / "splits/validation.csv").string(), HeaderMode::plain);

    const char* names[] = {"annual", "wet", "dry"};
    TwoStagePipeline annual_pipeline;
    for (const char* name : names) {
        TwoStagePipeline pipeline =
            load_pipeline((out_dir / "models" / (std::string(name) + ".pipeline")).string());
        const TimeSeries test_slice =
            pipeline.season == Season::annual
                ? split.test
                : filter_months(split.test, pipeline.season_months);
        const EvaluationResult result = evaluate(pipeline, test_slice);
        artifacts.files.push_back(
            ctx.emit("metrics_" + std::string(name) + ".csv", metrics::to_csv(result.report)));
        record_metrics(manifest, name, result.report);
        if (pipeline.season == Season::annual) annual_pipeline = std::move(pipeline);
    }

    const TimeSeries validation_day = filter_daytime(split.validation);
    const PredictionTable pred = predict(annual_pipeline, validation_day);
    artifacts.files.push_back(ctx.emit("predictions_2022.csv", predictions_csv(pred)));
    artifacts.files.push_back(
        ctx.emit("predictions_2022_daily.csv", daily_predictions_csv(validation_day, pred)));
    artifacts.files.push_back(
        ctx.emit("feature_importance.csv", importance_csv(annual_pipeline)));

    const pv::IrradianceSeries irr = to_irradiance_series(pred);
    for (const auto& spec_path : config.system_specs) {
        const pv::PvSystemSpec spec = pv::load_system_spec(spec_path);
        const pv::EnergySimulation sim = pv::simulate_energy(irr, validation_day, spec);
        artifacts.files.push_back(ctx.emit("energy_" + sanitize_name(spec.name) + ".csv",
                                           daily_energy_csv(sim)));
    }

    manifest.finished = now_iso8601();
    write_manifest(manifest, (out_dir / "manifest.json").string());
    return artifacts;
}

}  // namespace solarcast
