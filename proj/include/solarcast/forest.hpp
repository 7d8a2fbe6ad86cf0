#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace solarcast::rf {

// Column-major feature matrix.
struct FeatureMatrix {
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;  // [feature][row]

    size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }
    size_t n_features() const { return columns.size(); }
    double value(size_t row, size_t feature) const { return columns[feature][row]; }
};

enum class MaxFeatures { all, sqrt_count, fraction };

struct ForestHyperParams {
    int n_trees = 100;
    int max_depth = 0;  // 0 = unlimited
    int min_samples_leaf = 1;
    int min_samples_split = 2;
    MaxFeatures max_features = MaxFeatures::all;
    double max_features_fraction = 1.0;  // used when max_features == fraction
    bool bootstrap = true;
    uint64_t seed = 0;

    void check() const;
    // Number of candidate features per split for a given feature count.
    size_t features_per_split(size_t n_features) const;
};

// Flat node array; children of an internal node are adjacent (right = left+1).
// Leaves carry the mean of their training targets in `split_or_value`.
struct TreeNode {
    double split_or_value = 0.0;  // threshold for internal nodes, value for leaves
    int32_t feature = -1;         // -1 marks a leaf
    int32_t left = -1;
};

struct RegressionTree {
    std::vector<TreeNode> nodes;

    double predict(std::span<const double> row) const {
        int32_t idx = 0;
        while (nodes[idx].feature >= 0) {
            const auto& n = nodes[idx];
            idx = row[static_cast<size_t>(n.feature)] <= n.split_or_value ? n.left : n.left + 1;
        }
        return nodes[idx].split_or_value;
    }

    size_t depth() const;
    size_t leaf_count() const;
};

struct ForestModel {
    ForestHyperParams params;
    std::vector<std::string> feature_names;
    std::vector<RegressionTree> trees;
    std::vector<double> importances;  // normalized to sum 1 when any split exists
    bool importances_defined = false; // false when every tree is a single leaf
    double y_min = 0.0;
    double y_max = 0.0;

    double predict_row(std::span<const double> row) const;
    std::vector<double> predict(const FeatureMatrix& x) const;
};

// Grow a bagged ensemble of CART regression trees. Splits maximize variance
// reduction; candidate thresholds are midpoints between consecutive distinct
// sorted feature values; ties resolve to the lowest feature index, then the
// smallest threshold. Training is deterministic for a fixed seed, and
// identical whether trees are grown serially or in parallel.
ForestModel fit(const FeatureMatrix& x, std::span<const double> y,
                const ForestHyperParams& params, int n_threads = 0);

// Per-feature impurity decrease weighted by node sample fraction, averaged
// over trees (already stored on the model; exposed for the report CSV).
std::vector<double> feature_importances(const ForestModel& model);

void save_forest(const ForestModel& model, const std::string& path);
ForestModel load_forest(const std::string& path);

void write_forest(const ForestModel& model, std::string& out);
ForestModel read_forest(const std::string& data, size_t& offset);

}  // namespace solarcast::rf
