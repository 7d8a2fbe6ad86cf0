#include "solarcast/forest.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numeric>
#include <thread>

#include "solarcast/common.hpp"
#include "solarcast/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "model files assume a little-endian host");

namespace solarcast::rf {

void ForestHyperParams::check() const {
    if (n_trees < 1) throw UsageError("forest: n_trees must be >= 1");
    if (max_depth < 0) throw UsageError("forest: max_depth must be >= 0 (0 = unlimited)");
    if (min_samples_leaf < 1) throw UsageError("forest: min_samples_leaf must be >= 1");
    if (min_samples_split < 2) throw UsageError("forest: min_samples_split must be >= 2");
    if (max_features == MaxFeatures::fraction &&
        !(max_features_fraction > 0.0 && max_features_fraction <= 1.0)) {
        throw UsageError("forest: max_features fraction must be in (0,1]");
    }
}

size_t ForestHyperParams::features_per_split(size_t n_features) const {
    switch (max_features) {
        case MaxFeatures::all:
            return n_features;
        case MaxFeatures::sqrt_count:
            return std::max<size_t>(
                1, static_cast<size_t>(std::sqrt(static_cast<double>(n_features))));
        case MaxFeatures::fraction:
            return std::max<size_t>(
                1, static_cast<size_t>(max_features_fraction * static_cast<double>(n_features)));
    }
    return n_features;
}

size_t RegressionTree::depth() const {
    if (nodes.empty()) return 0;
    size_t max_depth = 0;
    std::vector<std::pair<int32_t, size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        auto [idx, d] = stack.back();
        stack.pop_back();
        max_depth = std::max(max_depth, d);
        if (nodes[idx].feature >= 0) {
            stack.push_back({nodes[idx].left, d + 1});
            stack.push_back({nodes[idx].left + 1, d + 1});
        }
    }
    return max_depth;
}

size_t RegressionTree::leaf_count() const {
    size_t leaves = 0;
    for (const auto& n : nodes) {
        if (n.feature < 0) ++leaves;
    }
    return leaves;
}

namespace {

// Per-tree training workspace over the bootstrap sample. Rows are compressed
// to unique indices with integer weights; each feature keeps a presorted
// index array that is stably partitioned as nodes split, so no per-node
// sorting is needed.
struct TreeBuilder {
    const FeatureMatrix& x;
    std::span<const double> y;
    const ForestHyperParams& params;

    size_t n_features;
    size_t m = 0;                       // unique sampled rows
    std::vector<double> yv;             // [m]
    std::vector<double> wv;             // [m] bootstrap multiplicities
    std::vector<std::vector<double>> fv;  // [feature][m]
    std::vector<int32_t> order;         // n_features segments of length m
    std::vector<int32_t> scratch;
    std::vector<uint8_t> goes_left;
    std::vector<size_t> feature_pool;   // for per-node subsampling
    std::vector<double> importances;    // unnormalized, this tree

    TreeBuilder(const FeatureMatrix& x_, std::span<const double> y_,
                const ForestHyperParams& p)
        : x(x_), y(y_), params(p), n_features(x_.n_features()) {
        importances.assign(n_features, 0.0);
        feature_pool.resize(n_features);
        std::iota(feature_pool.begin(), feature_pool.end(), 0);
    }

    void sample_rows(Rng& rng) {
        const size_t n = x.n_rows();
        std::vector<uint32_t> counts(n, 0);
        if (params.bootstrap) {
            for (size_t i = 0; i < n; ++i) {
                counts[static_cast<size_t>(rng.next_below(n))]++;
            }
        } else {
            std::fill(counts.begin(), counts.end(), 1);
        }
        m = 0;
        for (size_t i = 0; i < n; ++i) {
            if (counts[i] > 0) ++m;
        }
        yv.resize(m);
        wv.resize(m);
        fv.assign(n_features, {});
        for (auto& col : fv) col.resize(m);
        size_t k = 0;
        for (size_t i = 0; i < n; ++i) {
            if (counts[i] == 0) continue;
            yv[k] = y[i];
            wv[k] = static_cast<double>(counts[i]);
            for (size_t f = 0; f < n_features; ++f) {
                fv[f][k] = x.columns[f][i];
            }
            ++k;
        }
        order.resize(n_features * m);
        scratch.resize(m);
        goes_left.resize(m);
        for (size_t f = 0; f < n_features; ++f) {
            int32_t* seg = order.data() + f * m;
            std::iota(seg, seg + m, 0);
            const double* col = fv[f].data();
            std::sort(seg, seg + m, [col](int32_t a, int32_t b) {
                if (col[a] != col[b]) return col[a] < col[b];
                return a < b;
            });
        }
    }

    struct NodeTask {
        size_t begin, end;
        int depth;
        int32_t node_index;
    };

    struct BestSplit {
        double proxy = -1.0;
        int feature = -1;
        double threshold = 0.0;
    };

    RegressionTree build(Rng& rng) {
        sample_rows(rng);
        RegressionTree tree;
        tree.nodes.reserve(2 * m);
        tree.nodes.push_back({});
        std::vector<NodeTask> stack{{0, m, 0, 0}};
        double w_root = 0.0;
        for (double w : wv) w_root += w;

        const size_t k_features = params.features_per_split(n_features);

        while (!stack.empty()) {
            NodeTask task = stack.back();
            stack.pop_back();

            // Node statistics from any feature's segment (all hold the same rows).
            const int32_t* seg0 = order.data() + task.begin;
            double w_sum = 0.0, s_sum = 0.0;
            double y_lo = yv[seg0[0]], y_hi = y_lo;
            for (size_t i = task.begin; i < task.end; ++i) {
                const int32_t id = order[i];
                w_sum += wv[id];
                s_sum += wv[id] * yv[id];
                y_lo = std::min(y_lo, yv[id]);
                y_hi = std::max(y_hi, yv[id]);
            }
            const double leaf_value = s_sum / w_sum;

            const bool depth_ok = params.max_depth == 0 || task.depth < params.max_depth;
            const bool size_ok = w_sum >= static_cast<double>(params.min_samples_split);
            const bool pure = y_lo == y_hi;
            BestSplit best;
            if (depth_ok && size_ok && !pure && task.end - task.begin > 1) {
                best = find_split(task, w_sum, s_sum, k_features, rng);
            }
            if (best.feature < 0) {
                tree.nodes[task.node_index] = {leaf_value, -1, -1};
                continue;
            }

            importances[best.feature] +=
                (best.proxy - s_sum * s_sum / w_sum) / w_root;

            const size_t left_end = partition(task, best);
            const int32_t left_index = static_cast<int32_t>(tree.nodes.size());
            tree.nodes[task.node_index] = {best.threshold,
                                           static_cast<int32_t>(best.feature), left_index};
            tree.nodes.push_back({});
            tree.nodes.push_back({});
            stack.push_back({left_end, task.end, task.depth + 1, left_index + 1});
            stack.push_back({task.begin, left_end, task.depth + 1, left_index});
        }
        return tree;
    }

    BestSplit find_split(const NodeTask& task, double w_sum, double s_sum,
                         size_t k_features, Rng& rng) {
        BestSplit best;
        best.proxy = s_sum * s_sum / w_sum;  // baseline: no split
        const double min_leaf = static_cast<double>(params.min_samples_leaf);

        if (k_features < n_features) {
            for (size_t j = 0; j < k_features; ++j) {
                const size_t swap_with =
                    j + static_cast<size_t>(rng.next_below(n_features - j));
                std::swap(feature_pool[j], feature_pool[swap_with]);
            }
            // Fixed evaluation order keeps the lowest-index tie-break stable.
            std::sort(feature_pool.begin(),
                      feature_pool.begin() + static_cast<long>(k_features));
        }

        for (size_t j = 0; j < k_features; ++j) {
            const size_t f = feature_pool[j];
            const int32_t* seg = order.data() + f * m;
            const double* col = fv[f].data();
            double wl = 0.0, sl = 0.0;
            for (size_t i = task.begin + 1; i < task.end; ++i) {
                const int32_t prev = seg[i - 1];
                wl += wv[prev];
                sl += wv[prev] * yv[prev];
                const double pv = col[prev];
                const double v = col[seg[i]];
                if (v == pv) continue;
                const double wr = w_sum - wl;
                if (wl < min_leaf || wr < min_leaf) continue;
                const double sr = s_sum - sl;
                const double proxy = sl * sl / wl + sr * sr / wr;
                if (proxy > best.proxy) {
                    double thr = std::midpoint(pv, v);
                    if (!(thr < v)) thr = pv;
                    best.proxy = proxy;
                    best.feature = static_cast<int>(f);
                    best.threshold = thr;
                }
            }
        }
        return best;
    }

    // Stable partition of every feature segment by the chosen split.
    size_t partition(const NodeTask& task, const BestSplit& best) {
        const double* col = fv[static_cast<size_t>(best.feature)].data();
        size_t n_left = 0;
        for (size_t i = task.begin; i < task.end; ++i) {
            const int32_t id = order[i];
            const bool left = col[id] <= best.threshold;
            goes_left[id] = left;
            n_left += left;
        }
        for (size_t f = 0; f < n_features; ++f) {
            int32_t* seg = order.data() + f * m;
            size_t lp = task.begin;
            size_t rp = 0;
            for (size_t i = task.begin; i < task.end; ++i) {
                const int32_t id = seg[i];
                if (goes_left[id]) {
                    seg[lp++] = id;
                } else {
                    scratch[rp++] = id;
                }
            }
            std::copy(scratch.begin(), scratch.begin() + static_cast<long>(rp),
                      seg + lp);
        }
        return task.begin + n_left;
    }
};

void check_training_data(const FeatureMatrix& x, std::span<const double> y) {
    if (x.n_features() == 0 || x.n_rows() == 0) {
        throw DataError("forest: empty training data");
    }
    if (x.n_rows() != y.size()) {
        throw DataError("forest: row count " + std::to_string(x.n_rows()) +
                        " does not match target count " + std::to_string(y.size()));
    }
    if (x.names.size() != x.n_features()) {
        throw DataError("forest: feature name count mismatch");
    }
    for (size_t f = 0; f < x.n_features(); ++f) {
        if (x.columns[f].size() != x.n_rows()) {
            throw DataError("forest: ragged feature matrix");
        }
        for (double v : x.columns[f]) {
            if (!std::isfinite(v)) {
                throw DataError("forest: non-finite value in feature '" + x.names[f] + "'");
            }
        }
    }
    for (double v : y) {
        if (!std::isfinite(v)) throw DataError("forest: non-finite target value");
    }
}

}  // namespace

ForestModel fit(const FeatureMatrix& x, std::span<const double> y,
                const ForestHyperParams& params, int n_threads) {
    params.check();
    check_training_data(x, y);

    ForestModel model;
    model.params = params;
    model.feature_names = x.names;
    model.trees.resize(static_cast<size_t>(params.n_trees));
    auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    model.y_min = *lo;
    model.y_max = *hi;

    std::vector<std::vector<double>> tree_importances(
        static_cast<size_t>(params.n_trees));

    auto build_one = [&](size_t t) {
        Rng rng = Rng::substream(params.seed, t);
        TreeBuilder builder(x, y, params);
        model.trees[t] = builder.build(rng);
        tree_importances[t] = std::move(builder.importances);
    };

    size_t hw = n_threads > 0 ? static_cast<size_t>(n_threads)
                              : std::max(1u, std::thread::hardware_concurrency());
    hw = std::min<size_t>(hw, static_cast<size_t>(params.n_trees));
    if (hw <= 1) {
        for (size_t t = 0; t < model.trees.size(); ++t) build_one(t);
    } else {
        std::vector<std::thread> workers;
        std::atomic<size_t> next{0};
        for (size_t w = 0; w < hw; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    const size_t t = next.fetch_add(1);
                    if (t >= model.trees.size()) break;
                    build_one(t);
                }
            });
        }
        for (auto& th : workers) th.join();
    }

    model.importances.assign(x.n_features(), 0.0);
    for (const auto& imp : tree_importances) {
        for (size_t f = 0; f < imp.size(); ++f) model.importances[f] += imp[f];
    }
    double total = std::accumulate(model.importances.begin(), model.importances.end(), 0.0);
    if (total > 0.0) {
        for (double& v : model.importances) v /= total;
        model.importances_defined = true;
    } else {
        std::fill(model.importances.begin(), model.importances.end(), 0.0);
        model.importances_defined = false;
    }
    return model;
}

double ForestModel::predict_row(std::span<const double> row) const {
    if (row.size() != feature_names.size()) {
        throw DataError("forest predict: expected " + std::to_string(feature_names.size()) +
                        " features, got " + std::to_string(row.size()));
    }
    double sum = 0.0;
    for (const auto& tree : trees) sum += tree.predict(row);
    return sum / static_cast<double>(trees.size());
}

std::vector<double> ForestModel::predict(const FeatureMatrix& x) const {
    if (x.n_features() != feature_names.size()) {
        throw DataError("forest predict: expected " + std::to_string(feature_names.size()) +
                        " features, got " + std::to_string(x.n_features()));
    }
    const size_t n = x.n_rows();
    std::vector<double> out(n, 0.0);
    std::vector<double> row(x.n_features());
    for (size_t i = 0; i < n; ++i) {
        for (size_t f = 0; f < x.n_features(); ++f) row[f] = x.columns[f][i];
        out[i] = predict_row(row);
    }
    return out;
}

std::vector<double> feature_importances(const ForestModel& model) {
    return model.importances;
}

namespace {

constexpr uint32_t kForestMagic = 0x53435246;  // "SCRF"
constexpr uint16_t kForestVersion = 1;

template <typename T>
void put(std::string& out, const T& v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

void put_string(std::string& out, const std::string& s) {
    put<uint32_t>(out, static_cast<uint32_t>(s.size()));
    out.append(s);
}

template <typename T>
T get(const std::string& data, size_t& offset) {
    if (offset + sizeof(T) > data.size()) {
        throw DataError("model file truncated");
    }
    T v;
    std::memcpy(&v, data.data() + offset, sizeof(T));
    offset += sizeof(T);
    return v;
}

std::string get_string(const std::string& data, size_t& offset) {
    const uint32_t len = get<uint32_t>(data, offset);
    if (offset + len > data.size()) {
        throw DataError("model file truncated");
    }
    std::string s = data.substr(offset, len);
    offset += len;
    return s;
}

}  // namespace

void write_forest(const ForestModel& model, std::string& out) {
    put(out, kForestMagic);
    put(out, kForestVersion);
    put<int32_t>(out, model.params.n_trees);
    put<int32_t>(out, model.params.max_depth);
    put<int32_t>(out, model.params.min_samples_leaf);
    put<int32_t>(out, model.params.min_samples_split);
    put<uint8_t>(out, static_cast<uint8_t>(model.params.max_features));
    put(out, model.params.max_features_fraction);
    put<uint8_t>(out, model.params.bootstrap ? 1 : 0);
    put(out, model.params.seed);
    put<uint32_t>(out, static_cast<uint32_t>(model.feature_names.size()));
    for (const auto& name : model.feature_names) put_string(out, name);
    put(out, model.y_min);
    put(out, model.y_max);
    put<uint8_t>(out, model.importances_defined ? 1 : 0);
    for (double v : model.importances) put(out, v);
    put<uint32_t>(out, static_cast<uint32_t>(model.trees.size()));
    for (const auto& tree : model.trees) {
        put<uint32_t>(out, static_cast<uint32_t>(tree.nodes.size()));
        for (const auto& node : tree.nodes) {
            put(out, node.split_or_value);
            put(out, node.feature);
            put(out, node.left);
        }
    }
}

ForestModel read_forest(const std::string& data, size_t& offset) {
    if (get<uint32_t>(data, offset) != kForestMagic) {
        throw DataError("not a forest model file");
    }
    if (get<uint16_t>(data, offset) != kForestVersion) {
        throw DataError("unsupported forest model version");
    }
    ForestModel model;
    model.params.n_trees = get<int32_t>(data, offset);
    model.params.max_depth = get<int32_t>(data, offset);
    model.params.min_samples_leaf = get<int32_t>(data, offset);
    model.params.min_samples_split = get<int32_t>(data, offset);
    model.params.max_features = static_cast<MaxFeatures>(get<uint8_t>(data, offset));
    model.params.max_features_fraction = get<double>(data, offset);
    model.params.bootstrap = get<uint8_t>(data, offset) != 0;
    model.params.seed = get<uint64_t>(data, offset);
    const uint32_t n_features = get<uint32_t>(data, offset);
    model.feature_names.reserve(n_features);
    for (uint32_t f = 0; f < n_features; ++f) {
        model.feature_names.push_back(get_string(data, offset));
    }
    model.y_min = get<double>(data, offset);
    model.y_max = get<double>(data, offset);
    model.importances_defined = get<uint8_t>(data, offset) != 0;
    model.importances.resize(n_features);
    for (uint32_t f = 0; f < n_features; ++f) {
        model.importances[f] = get<double>(data, offset);
    }
    const uint32_t n_trees = get<uint32_t>(data, offset);
    model.trees.resize(n_trees);
    for (uint32_t t = 0; t < n_trees; ++t) {
        const uint32_t n_nodes = get<uint32_t>(data, offset);
        model.trees[t].nodes.resize(n_nodes);
        for (uint32_t i = 0; i < n_nodes; ++i) {
            TreeNode& node = model.trees[t].nodes[i];
            node.split_or_value = get<double>(data, offset);
            node.feature = get<int32_t>(data, offset);
            node.left = get<int32_t>(data, offset);
        }
    }
    return model;
}

void save_forest(const ForestModel& model, const std::string& path) {
    std::string buf;
    write_forest(model, buf);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open model file for writing: " + path);
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

ForestModel load_forest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open model file: " + path);
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    size_t offset = 0;
    return read_forest(data, offset);
}

}  // namespace solarcast::rf
