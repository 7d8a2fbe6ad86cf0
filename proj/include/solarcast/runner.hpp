#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "solarcast/forest.hpp"
#include "solarcast/ingest.hpp"
#include "solarcast/pipeline.hpp"
#include "solarcast/preprocess.hpp"

namespace solarcast {

struct RunConfig {
    std::string input_csv;
    HeaderMode header_mode = HeaderMode::auto_detect;
    SplitSpec split;
    rf::ForestHyperParams forest;
    std::vector<std::string> system_specs;
    std::string output_dir = "out";
    int threads = 0;

    static RunConfig from_file(const std::string& path);
    static RunConfig from_json_text(const std::string& text, const std::string& base_dir);
    std::string to_json_text() const;
    uint64_t config_hash() const;
    void check_paths() const;
};

// Holds an exclusive lock on an output directory for the process lifetime.
class DirectoryLock {
public:
    explicit DirectoryLock(const std::string& dir);
    ~DirectoryLock();
    DirectoryLock(const DirectoryLock&) = delete;
    DirectoryLock& operator=(const DirectoryLock&) = delete;

private:
    std::string lock_path_;
};

// Writes `content` to path via a .partial temporary; the .partial file stays
// behind if anything fails before the final rename.
void write_artifact(const std::string& path, const std::string& content);

std::string now_iso8601();

struct ManifestEntry {
    std::string command;
    uint64_t config_hash = 0;
    std::string version;
    std::string started;
    std::string finished;
    std::vector<std::pair<std::string, int64_t>> row_counts;
    std::vector<std::string> outputs;
    std::vector<std::pair<std::string, double>> metrics;
};

void write_manifest(const ManifestEntry& entry, const std::string& path);

struct ExperimentArtifacts {
    std::vector<std::string> files;  // everything produced, in order
};

// The full batch experiment: summary table, annual/wet/dry metrics, 2022
// hourly and daily predictions, feature importances, and daily energy for
// each configured system spec. Stages persist their intermediates under the
// output directory so `report` can regenerate CSVs without retraining.
ExperimentArtifacts run_full_experiment(const RunConfig& config);

// Regenerate the report CSVs from cached splits and models.
ExperimentArtifacts regenerate_report(const RunConfig& config);

}  // namespace solarcast
