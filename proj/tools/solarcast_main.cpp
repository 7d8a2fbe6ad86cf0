// solarcast batch CLI: ingest -> preprocess -> train -> evaluate -> predict ->
// simulate -> report, plus the synthetic dataset generator.

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "solarcast/common.hpp"
#include "solarcast/datagen.hpp"
#include "solarcast/eda.hpp"
#include "solarcast/ingest.hpp"
#include "solarcast/pipeline.hpp"
#include "solarcast/preprocess.hpp"
#include "solarcast/pv.hpp"
#include "solarcast/runner.hpp"

namespace fs = std::filesystem;
using namespace solarcast;

namespace {

HeaderMode header_mode_from(const std::string& s) {
    if (s == "auto") return HeaderMode::auto_detect;
    if (s == "plain") return HeaderMode::plain;
    if (s == "nsrdb") return HeaderMode::nsrdb;
    throw UsageError("header mode must be auto|plain|nsrdb");
}

std::set<int> parse_month_set(const std::string& text) {
    std::set<int> months;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const size_t dash = part.find('-');
        if (dash != std::string::npos) {
            const int lo = std::stoi(part.substr(0, dash));
            const int hi = std::stoi(part.substr(dash + 1));
            for (int m = lo; m <= hi; ++m) months.insert(m);
        } else if (!part.empty()) {
            months.insert(std::stoi(part));
        }
    }
    if (months.empty()) throw UsageError("empty month set '" + text + "'");
    return months;
}

int64_t parse_timestamp(const std::string& text) {
    int y, mo, d, h, mi;
    if (std::sscanf(text.c_str(), "%d-%d-%d %d:%d", &y, &mo, &d, &h, &mi) != 5) {
        throw DataError("cannot parse timestamp '" + text + "'");
    }
    return to_epoch_minutes({y, mo, d, h, mi});
}

// Locate a bundled system spec by short name, checking the usual roots.
std::string resolve_system_spec(const std::string& name_or_path) {
    if (fs::exists(name_or_path)) return name_or_path;
    std::string file;
    if (name_or_path == "trina") {
        file = "trina_tsm500.json";
    } else if (name_or_path == "canadian") {
        file = "canadian_cs3y500.json";
    } else {
        throw UsageError("unknown module '" + name_or_path +
                         "' (expected trina, canadian, or a spec file path)");
    }
    std::vector<fs::path> roots;
    if (const char* env = std::getenv("SOLARCAST_SYSTEMS_DIR")) roots.emplace_back(env);
    roots.emplace_back("systems");
    std::error_code ec;
    const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
    if (!ec) {
        roots.push_back(exe.parent_path() / "../systems");
        roots.push_back(exe.parent_path() / "../../systems");
    }
    for (const auto& root : roots) {
        if (fs::exists(root / file)) return (root / file).string();
    }
    throw UsageError("bundled system spec '" + file +
                     "' not found (set SOLARCAST_SYSTEMS_DIR)");
}

ManifestEntry make_manifest(const std::string& command) {
    ManifestEntry m;
    m.command = command;
    m.version = SOLARCAST_VERSION;
    return m;
}

pv::IrradianceSeries load_predictions_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open predictions: " + path);
    pv::IrradianceSeries irr;
    std::string line;
    if (!std::getline(in, line)) throw DataError(path + ": empty file");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string ts, cs_ghi, cs_dni, cs_dhi, ghi, dni, dhi;
        std::getline(ss, ts, ',');
        std::getline(ss, cs_ghi, ',');
        std::getline(ss, cs_dni, ',');
        std::getline(ss, cs_dhi, ',');
        std::getline(ss, ghi, ',');
        std::getline(ss, dni, ',');
        std::getline(ss, dhi, ',');
        if (ghi.empty()) continue;  // rows without an actual-irradiance prediction
        irr.epoch_minutes.push_back(parse_timestamp(ts));
        irr.ghi.push_back(std::stod(ghi));
        irr.dni.push_back(std::stod(dni));
        irr.dhi.push_back(std::stod(dhi));
    }
    return irr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"solarcast: solar irradiance forecasting and PV energy simulation"};
    app.require_subcommand(1);

    // --- ingest ---
    auto* cmd_ingest = app.add_subcommand("ingest", "Parse a weather CSV and summarize it");
    std::string in_path, header_mode = "auto", summary_out, validation_out;
    cmd_ingest->add_option("--input", in_path, "input CSV")->required();
    cmd_ingest->add_option("--header-mode", header_mode, "auto|plain|nsrdb");
    cmd_ingest->add_option("--summary", summary_out, "summary statistics CSV");
    cmd_ingest->add_option("--validation-report", validation_out, "validation issues CSV");

    // --- preprocess ---
    auto* cmd_pre = app.add_subcommand("preprocess", "Shift, filter and split a dataset");
    std::string pre_input, pre_out_dir, wet_months_text = "5-10";
    uint64_t pre_seed = 0;
    bool pre_seed_set = false, pre_chronological = false;
    double pre_fraction = 0.8;
    int pre_validation_year = 2022;
    cmd_pre->add_option("--input", pre_input, "input CSV")->required();
    cmd_pre->add_option("--seed", pre_seed, "shuffle seed")->each([&](const std::string&) {
        pre_seed_set = true;
    });
    cmd_pre->add_option("--wet-months", wet_months_text, "wet season months, e.g. 5-10");
    cmd_pre->add_option("--train-fraction", pre_fraction, "train fraction (default 0.8)");
    cmd_pre->add_option("--validation-year", pre_validation_year, "holdout year");
    cmd_pre->add_flag("--chronological", pre_chronological, "ordered split instead of shuffle");
    cmd_pre->add_option("--out-dir", pre_out_dir, "output directory")->required();

    // --- train ---
    auto* cmd_train = app.add_subcommand("train", "Train a two-stage pipeline");
    std::string train_season = "annual", train_data_dir, train_model_out;
    uint64_t train_seed = 0;
    bool train_seed_set = false;
    int train_trees = 100, train_threads = 0;
    std::string train_wet_months = "5-10";
    cmd_train->add_option("--season", train_season, "annual|wet|dry");
    cmd_train->add_option("--data", train_data_dir, "preprocess output directory")->required();
    cmd_train->add_option("--seed", train_seed, "forest seed")->each([&](const std::string&) {
        train_seed_set = true;
    });
    cmd_train->add_option("--trees", train_trees, "number of trees (default 100)");
    cmd_train->add_option("--threads", train_threads, "training threads (0 = auto)");
    cmd_train->add_option("--wet-months", train_wet_months, "wet season months");
    cmd_train->add_option("--model-out", train_model_out, "output model path")->required();

    // --- evaluate ---
    auto* cmd_eval = app.add_subcommand("evaluate", "Evaluate a trained pipeline");
    std::string eval_model, eval_split = "test", eval_data_dir, eval_report;
    bool eval_force = false;
    cmd_eval->add_option("--model", eval_model, "pipeline model path")->required();
    cmd_eval->add_option("--split", eval_split, "test|validation");
    cmd_eval->add_option("--data", eval_data_dir, "preprocess output directory")->required();
    cmd_eval->add_option("--report", eval_report, "metrics CSV path")->required();
    cmd_eval->add_flag("--force", eval_force, "evaluate outside the pipeline's season");

    // --- predict ---
    auto* cmd_predict = app.add_subcommand("predict", "Predict irradiance for a CSV");
    std::string predict_model, predict_input, predict_out;
    cmd_predict->add_option("--model", predict_model, "pipeline model path")->required();
    cmd_predict->add_option("--input", predict_input, "weather CSV")->required();
    cmd_predict->add_option("--out", predict_out, "predictions CSV")->required();

    // --- simulate ---
    auto* cmd_sim = app.add_subcommand("simulate", "Simulate PV energy from predictions");
    std::string sim_module = "trina", sim_predictions, sim_weather, sim_out_dir;
    cmd_sim->add_option("--module", sim_module, "trina|canadian|<spec path>");
    cmd_sim->add_option("--predictions", sim_predictions, "predictions CSV")->required();
    cmd_sim->add_option("--weather", sim_weather, "weather CSV")->required();
    cmd_sim->add_option("--out-dir", sim_out_dir, "output directory")->required();

    // --- eda ---
    auto* cmd_eda = app.add_subcommand("eda", "Correlation matrix and month-hour pivots");
    std::string eda_input, eda_corr_out, eda_pivot_out, eda_pivot_var = "GHI";
    bool eda_daytime = false;
    cmd_eda->add_option("--input", eda_input, "input CSV")->required();
    cmd_eda->add_option("--correlation", eda_corr_out, "correlation CSV");
    cmd_eda->add_option("--pivot", eda_pivot_out, "month-hour pivot CSV");
    cmd_eda->add_option("--pivot-variable", eda_pivot_var, "variable for the pivot");
    cmd_eda->add_flag("--daytime", eda_daytime, "restrict to daytime hours (after shift)");

    // --- run / report ---
    auto* cmd_run = app.add_subcommand("run", "Run the full experiment from a config");
    std::string run_config_path, run_out_override, run_input_override;
    int64_t run_seed_override = -1;
    int run_trees_override = -1;
    cmd_run->add_option("--config", run_config_path, "run config JSON")->required();
    cmd_run->add_option("--out-dir", run_out_override, "override output directory");
    cmd_run->add_option("--input", run_input_override, "override input CSV");
    cmd_run->add_option("--seed", run_seed_override, "override seed");
    cmd_run->add_option("--trees", run_trees_override, "override tree count");

    auto* cmd_report = app.add_subcommand("report", "Regenerate CSVs from cached artifacts");
    std::string report_config_path, report_out_override;
    cmd_report->add_option("--config", report_config_path, "run config JSON")->required();
    cmd_report->add_option("--out-dir", report_out_override, "override output directory");

    // --- datagen ---
    auto* cmd_gen = app.add_subcommand("datagen", "Generate the bundled synthetic dataset");
    std::string gen_out;
    int gen_start = 2005, gen_end = 2022;
    uint64_t gen_seed = datagen::GenerationOptions{}.seed;
    cmd_gen->add_option("--out", gen_out, "output CSV")->required();
    cmd_gen->add_option("--start-year", gen_start, "first year (default 2005)");
    cmd_gen->add_option("--end-year", gen_end, "last year (default 2022)");
    cmd_gen->add_option("--seed", gen_seed, "generator seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (cmd_ingest->parsed()) {
            const TimeSeries ts = parse_csv(in_path, header_mode_from(header_mode));
            log_info("parsed " + std::to_string(ts.size()) + " records from " + in_path);
            ManifestEntry manifest = make_manifest("ingest");
            manifest.row_counts.emplace_back("input", static_cast<int64_t>(ts.size()));
            std::string manifest_dir = ".";
            if (!summary_out.empty()) {
                write_artifact(summary_out, to_csv(summary_stats(ts)));
                manifest.outputs.push_back(summary_out);
                manifest_dir = fs::path(summary_out).parent_path().string();
            }
            if (!validation_out.empty()) {
                const ValidationReport report = validate(ts);
                std::ostringstream body;
                body << "kind,record_index,message\n";
                for (const auto& issue : report.issues) {
                    body << static_cast<int>(issue.kind) << ',' << issue.record_index << ','
                         << issue.message << '\n';
                }
                write_artifact(validation_out, body.str());
                manifest.outputs.push_back(validation_out);
                manifest.row_counts.emplace_back(
                    "missing_cloud_type",
                    static_cast<int64_t>(report.missing_cloud_type_count));
                manifest.row_counts.emplace_back("issues",
                                                 static_cast<int64_t>(report.issues.size()));
            }
            manifest.finished = now_iso8601();
            write_manifest(manifest,
                           (fs::path(manifest_dir.empty() ? "." : manifest_dir) /
                            "manifest_ingest.json").string());
        } else if (cmd_pre->parsed()) {
            if (!pre_seed_set) throw UsageError("preprocess: --seed is mandatory");
            SplitSpec spec;
            spec.shuffle_seed = pre_seed;
            spec.train_fraction = pre_fraction;
            spec.validation_year = pre_validation_year;
            spec.wet_months = parse_month_set(wet_months_text);
            spec.chronological = pre_chronological;
            spec.check();

            DirectoryLock lock(pre_out_dir);
            const TimeSeries raw = parse_csv(pre_input);
            const TimeSeries shifted = shift_timestamps(raw);
            Split split = split_holdout_and_train_test(shifted, spec);
            split.train = filter_daytime(split.train);
            split.test = filter_daytime(split.test);
            write_csv(split.train, (fs::path(pre_out_dir) / "train.csv").string());
            write_csv(split.test, (fs::path(pre_out_dir) / "test.csv").string());
            write_csv(split.validation, (fs::path(pre_out_dir) / "validation.csv").string());

            ManifestEntry manifest = make_manifest("preprocess");
            manifest.row_counts.emplace_back("input", static_cast<int64_t>(raw.size()));
            manifest.row_counts.emplace_back("train", static_cast<int64_t>(split.train.size()));
            manifest.row_counts.emplace_back("test", static_cast<int64_t>(split.test.size()));
            manifest.row_counts.emplace_back("validation",
                                             static_cast<int64_t>(split.validation.size()));
            manifest.row_counts.emplace_back("seed", static_cast<int64_t>(pre_seed));
            std::string months;
            for (int m : spec.wet_months) months += std::to_string(m) + " ";
            manifest.outputs = {(fs::path(pre_out_dir) / "train.csv").string(),
                                (fs::path(pre_out_dir) / "test.csv").string(),
                                (fs::path(pre_out_dir) / "validation.csv").string()};
            manifest.metrics.emplace_back("train_fraction", spec.train_fraction);
            write_manifest(manifest, (fs::path(pre_out_dir) / "manifest.json").string());
        } else if (cmd_train->parsed()) {
            if (!train_seed_set) throw UsageError("train: --seed is mandatory");
            const Season season = season_from_name(train_season);
            const std::set<int> wet = parse_month_set(train_wet_months);
            std::set<int> months;
            if (season == Season::wet) {
                months = wet;
            } else if (season == Season::dry) {
                for (int m = 1; m <= 12; ++m) {
                    if (!wet.count(m)) months.insert(m);
                }
            }
            TimeSeries train_data =
                parse_csv((fs::path(train_data_dir) / "train.csv").string());
            if (season != Season::annual) {
                TimeSeries filtered;
                for (const auto& r : train_data.records) {
                    if (months.count(r.month)) filtered.records.push_back(r);
                }
                train_data = std::move(filtered);
            }
            rf::ForestHyperParams params;
            params.n_trees = train_trees;
            params.seed = train_seed;
            TwoStagePipeline pipeline =
                train_pipeline(train_data, season, months, params, train_threads);
            save_pipeline(pipeline, train_model_out);
            log_info("trained " + std::string(season_name(season)) + " pipeline on " +
                     std::to_string(train_data.size()) + " records -> " + train_model_out);
        } else if (cmd_eval->parsed()) {
            if (!fs::exists(eval_model)) {
                throw DataError("evaluate: model not found: " + eval_model);
            }
            const TwoStagePipeline pipeline = load_pipeline(eval_model);
            if (eval_split != "test" && eval_split != "validation") {
                throw UsageError("evaluate: --split must be test or validation");
            }
            TimeSeries data = parse_csv(
                (fs::path(eval_data_dir) / (eval_split + ".csv")).string());
            if (!pipeline.season_months.empty()) {
                TimeSeries filtered;
                for (const auto& r : data.records) {
                    if (pipeline.season_months.count(r.month)) filtered.records.push_back(r);
                }
                data = std::move(filtered);
            }
            const EvaluationResult result = evaluate(pipeline, data, eval_force);
            write_artifact(eval_report, metrics::to_csv(result.report));
            std::cout << metrics::to_csv(result.report);
        } else if (cmd_predict->parsed()) {
            if (!fs::exists(predict_model)) {
                throw DataError("predict: model not found: " + predict_model);
            }
            const TwoStagePipeline pipeline = load_pipeline(predict_model);
            const TimeSeries input = parse_csv(predict_input);
            const PredictionTable pred = predict(pipeline, input);
            std::ostringstream out;
            out << "timestamp,pred_clearsky_ghi,pred_clearsky_dni,pred_clearsky_dhi,"
                   "pred_ghi,pred_dni,pred_dhi\n";
            out.setf(std::ios::fixed);
            out.precision(3);
            for (size_t i = 0; i < pred.size(); ++i) {
                out << format_timestamp(from_epoch_minutes(pred.epoch_minutes[i])) << ','
                    << pred.cs_ghi[i] << ',' << pred.cs_dni[i] << ',' << pred.cs_dhi[i] << ',';
                if (std::isnan(pred.ghi[i])) {
                    out << ",,";
                } else {
                    out << pred.ghi[i] << ',' << pred.dni[i] << ',' << pred.dhi[i];
                }
                out << '\n';
            }
            write_artifact(predict_out, out.str());
        } else if (cmd_sim->parsed()) {
            const std::string spec_path = resolve_system_spec(sim_module);
            const pv::PvSystemSpec spec = pv::load_system_spec(spec_path);
            const pv::IrradianceSeries irr = load_predictions_csv(sim_predictions);
            const TimeSeries weather = parse_csv(sim_weather);
            const pv::EnergySimulation sim = pv::simulate_energy(irr, weather, spec);
            fs::create_directories(sim_out_dir);
            std::ostringstream hourly;
            hourly << "timestamp,g_poa,cell_temp,p_dc,p_ac\n";
            hourly.setf(std::ios::fixed);
            hourly.precision(3);
            for (const auto& h : sim.hours) {
                hourly << format_timestamp(from_epoch_minutes(h.epoch_minutes)) << ','
                       << h.g_poa << ',' << h.cell_temp << ',' << h.p_dc << ',' << h.p_ac
                       << '\n';
            }
            write_artifact((fs::path(sim_out_dir) / "pv_hourly.csv").string(), hourly.str());
            std::ostringstream daily;
            daily << "date,energy_kwh\n";
            daily.setf(std::ios::fixed);
            daily.precision(6);
            for (const auto& d : sim.days) {
                daily << format_date(d.date) << ',' << d.energy_kwh << '\n';
            }
            write_artifact((fs::path(sim_out_dir) / "energy_daily.csv").string(), daily.str());
            log_info("simulated " + std::to_string(sim.hours.size()) + " hours for " +
                     spec.name);
        } else if (cmd_eda->parsed()) {
            TimeSeries ts = parse_csv(eda_input);
            if (eda_daytime) {
                ts = filter_daytime(shift_timestamps(ts));
            }
            if (!eda_corr_out.empty()) {
                write_artifact(eda_corr_out, eda::to_csv(eda::correlation_matrix(ts)));
            }
            if (!eda_pivot_out.empty()) {
                auto var = variable_from_name(eda_pivot_var);
                if (!var) throw UsageError("eda: unknown variable '" + eda_pivot_var + "'");
                write_artifact(eda_pivot_out, eda::to_csv(eda::month_hour_pivot(ts, *var)));
            }
        } else if (cmd_run->parsed()) {
            RunConfig config = RunConfig::from_file(run_config_path);
            if (!run_out_override.empty()) config.output_dir = run_out_override;
            if (!run_input_override.empty()) config.input_csv = run_input_override;
            if (run_seed_override >= 0) {
                config.split.shuffle_seed = static_cast<uint64_t>(run_seed_override);
                config.forest.seed = config.split.shuffle_seed;
            }
            if (run_trees_override > 0) config.forest.n_trees = run_trees_override;
            const ExperimentArtifacts artifacts = run_full_experiment(config);
            for (const auto& f : artifacts.files) std::cout << f << '\n';
        } else if (cmd_report->parsed()) {
            RunConfig config = RunConfig::from_file(report_config_path);
            if (!report_out_override.empty()) config.output_dir = report_out_override;
            const ExperimentArtifacts artifacts = regenerate_report(config);
            for (const auto& f : artifacts.files) std::cout << f << '\n';
        } else if (cmd_gen->parsed()) {
            datagen::GenerationOptions opts;
            opts.start_year = gen_start;
            opts.end_year = gen_end;
            opts.seed = gen_seed;
            const TimeSeries ts = datagen::generate(opts);
            fs::create_directories(fs::path(gen_out).parent_path().string().empty()
                                       ? "."
                                       : fs::path(gen_out).parent_path().string());
            datagen::write_nsrdb_csv(ts, gen_out);
            log_info("wrote " + std::to_string(ts.size()) + " records to " + gen_out);
        }
    } catch (const Error& e) {
        log_error(e.what());
        return e.exit_code();
    } catch (const std::exception& e) {
        log_error(e.what());
        return 2;
    }
    return 0;
}
