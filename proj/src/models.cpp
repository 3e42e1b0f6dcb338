#include "harkit/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

#include "json.hpp"

#include "harkit/error.hpp"

namespace harkit::models {

namespace {

using json = nlohmann::json;

constexpr int kModelFileVersion = 1;
constexpr char kModelFileFormat[] = "harkit-model";
constexpr double kVarianceFloor = 1e-9;

// splitmix64-style mixer; per-tree RNG streams come from (seed, tree index)
// so training is independent of worker count.
std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    std::uint64_t z = a + 0x9E3779B97F4A7C15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::size_t draw_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(rng() % n);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::clamp(threads, 1, n);
    if (threads <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            try {
                for (int i; (i = next.fetch_add(1)) < n;) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (std::thread& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

int argmax_lowest(std::span<const double> values) {
    int best = 0;
    for (int i = 1; i < static_cast<int>(values.size()); ++i) {
        if (values[static_cast<std::size_t>(i)] > values[static_cast<std::size_t>(best)]) best = i;
    }
    return best;
}

double entropy_from_counts(std::span<const std::size_t> counts, std::size_t total) {
    if (total == 0) return 0.0;
    double h = 0.0;
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

// ---------------------------------------------------------------------------
// Decision tree

struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<double> freq;  // leaf class frequencies
    int majority = 0;
};

struct Tree {
    std::vector<TreeNode> nodes;

    const TreeNode& walk(std::span<const double> features) const {
        int idx = 0;
        while (nodes[static_cast<std::size_t>(idx)].feature >= 0) {
            const TreeNode& node = nodes[static_cast<std::size_t>(idx)];
            idx = features[static_cast<std::size_t>(node.feature)] < node.threshold ? node.left
                                                                                    : node.right;
        }
        return nodes[static_cast<std::size_t>(idx)];
    }
};

class TreeBuilder {
public:
    TreeBuilder(const dataset::FeatureDataset& ds, int n_classes, int candidate_features,
                int min_leaf, std::mt19937_64& rng)
        : ds_(ds),
          n_classes_(n_classes),
          candidates_(candidate_features),
          min_leaf_(min_leaf),
          rng_(rng) {}

    Tree build(std::vector<std::size_t> indices) {
        Tree tree;
        build_node(tree, std::move(indices));
        return tree;
    }

private:
    struct Split {
        int feature = -1;
        double threshold = 0.0;
        double gain = 0.0;
    };

    int build_node(Tree& tree, std::vector<std::size_t> indices) {
        const int node_idx = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        std::vector<std::size_t> counts(static_cast<std::size_t>(n_classes_), 0);
        for (std::size_t i : indices) {
            counts[static_cast<std::size_t>(ds_.rows[i].label)]++;
        }
        const std::size_t total = indices.size();
        const bool pure =
            std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) <= 1;

        Split split;
        if (!pure && total > static_cast<std::size_t>(min_leaf_)) {
            split = find_split(indices, counts, total);
        }
        if (split.feature < 0) {
            make_leaf(tree.nodes[static_cast<std::size_t>(node_idx)], counts, total);
            return node_idx;
        }

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t i : indices) {
            const double v = ds_.rows[i].values[static_cast<std::size_t>(split.feature)];
            (v < split.threshold ? left : right).push_back(i);
        }
        indices.clear();
        indices.shrink_to_fit();

        const int left_idx = build_node(tree, std::move(left));
        const int right_idx = build_node(tree, std::move(right));
        TreeNode& node = tree.nodes[static_cast<std::size_t>(node_idx)];
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.left = left_idx;
        node.right = right_idx;
        return node_idx;
    }

    void make_leaf(TreeNode& node, std::span<const std::size_t> counts, std::size_t total) {
        node.feature = -1;
        node.freq.resize(static_cast<std::size_t>(n_classes_), 0.0);
        for (int c = 0; c < n_classes_; ++c) {
            node.freq[static_cast<std::size_t>(c)] =
                total == 0 ? 0.0
                           : static_cast<double>(counts[static_cast<std::size_t>(c)]) /
                                 static_cast<double>(total);
        }
        node.majority = argmax_lowest(node.freq);
    }

    Split find_split(const std::vector<std::size_t>& indices,
                     std::span<const std::size_t> counts, std::size_t total) {
        const int n_features = static_cast<int>(ds_.schema.size());
        std::vector<int> candidates = pick_candidates(n_features);
        const double parent_entropy = entropy_from_counts(counts, total);

        Split best;
        std::vector<std::size_t> order(indices);
        std::vector<std::size_t> left_counts(static_cast<std::size_t>(n_classes_));
        std::vector<std::size_t> right_counts(static_cast<std::size_t>(n_classes_));
        for (int f : candidates) {
            const std::size_t fi = static_cast<std::size_t>(f);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                const double va = ds_.rows[a].values[fi];
                const double vb = ds_.rows[b].values[fi];
                return va < vb || (va == vb && a < b);
            });
            std::fill(left_counts.begin(), left_counts.end(), 0);
            std::size_t n_left = 0;
            for (std::size_t i = 0; i + 1 < order.size(); ++i) {
                left_counts[static_cast<std::size_t>(ds_.rows[order[i]].label)]++;
                ++n_left;
                const double v = ds_.rows[order[i]].values[fi];
                const double v_next = ds_.rows[order[i + 1]].values[fi];
                if (v == v_next) continue;
                if (n_left < static_cast<std::size_t>(min_leaf_) ||
                    total - n_left < static_cast<std::size_t>(min_leaf_)) {
                    continue;
                }
                for (int c = 0; c < n_classes_; ++c) {
                    right_counts[static_cast<std::size_t>(c)] =
                        counts[static_cast<std::size_t>(c)] -
                        left_counts[static_cast<std::size_t>(c)];
                }
                const std::size_t n_right = total - n_left;
                const double gain =
                    parent_entropy -
                    (static_cast<double>(n_left) / static_cast<double>(total)) *
                        entropy_from_counts(left_counts, n_left) -
                    (static_cast<double>(n_right) / static_cast<double>(total)) *
                        entropy_from_counts(right_counts, n_right);
                if (gain > best.gain) {
                    best.feature = f;
                    // midpoints of adjacent floats can round back onto v,
                    // which would empty the left partition
                    const double midpoint = 0.5 * (v + v_next);
                    best.threshold = midpoint > v ? midpoint : v_next;
                    best.gain = gain;
                }
            }
        }
        return best;
    }

    std::vector<int> pick_candidates(int n_features) {
        if (candidates_ <= 0 || candidates_ >= n_features) {
            std::vector<int> all(static_cast<std::size_t>(n_features));
            for (int i = 0; i < n_features; ++i) all[static_cast<std::size_t>(i)] = i;
            return all;
        }
        // Partial Fisher-Yates over the feature ids.
        std::vector<int> pool(static_cast<std::size_t>(n_features));
        for (int i = 0; i < n_features; ++i) pool[static_cast<std::size_t>(i)] = i;
        std::vector<int> picked;
        picked.reserve(static_cast<std::size_t>(candidates_));
        for (int i = 0; i < candidates_; ++i) {
            const std::size_t j =
                static_cast<std::size_t>(i) +
                draw_index(rng_, static_cast<std::size_t>(n_features - i));
            std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
            picked.push_back(pool[static_cast<std::size_t>(i)]);
        }
        return picked;
    }

    const dataset::FeatureDataset& ds_;
    int n_classes_;
    int candidates_;  // <= 0 means all features
    int min_leaf_;
    std::mt19937_64& rng_;
};

// ---------------------------------------------------------------------------
// Concrete models

json tree_to_json(const Tree& tree) {
    json features = json::array();
    json thresholds = json::array();
    json lefts = json::array();
    json rights = json::array();
    json freqs = json::array();
    json majorities = json::array();
    for (const TreeNode& node : tree.nodes) {
        features.push_back(node.feature);
        thresholds.push_back(node.threshold);
        lefts.push_back(node.left);
        rights.push_back(node.right);
        freqs.push_back(node.freq);
        majorities.push_back(node.majority);
    }
    return json{{"feature", features}, {"threshold", thresholds}, {"left", lefts},
                {"right", rights},     {"freq", freqs},           {"majority", majorities}};
}

Tree tree_from_json(const json& j) {
    Tree tree;
    const std::size_t n = j.at("feature").size();
    tree.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        TreeNode& node = tree.nodes[i];
        node.feature = j.at("feature")[i].get<int>();
        node.threshold = j.at("threshold")[i].get<double>();
        node.left = j.at("left")[i].get<int>();
        node.right = j.at("right")[i].get<int>();
        node.freq = j.at("freq")[i].get<std::vector<double>>();
        node.majority = j.at("majority")[i].get<int>();
    }
    return tree;
}

class ForestModel final : public TrainedModel {
public:
    ForestModel(ModelKind kind, ModelConfig config, std::vector<std::string> schema,
                std::vector<std::string> classes, std::vector<Tree> trees)
        : TrainedModel(kind, std::move(config), std::move(schema), std::move(classes)),
          trees_(std::move(trees)) {}

    json params() const {
        json arr = json::array();
        for (const Tree& tree : trees_) arr.push_back(tree_to_json(tree));
        return json{{"trees", arr}};
    }

protected:
    Prediction predict_checked(std::span<const double> features) const override {
        std::vector<double> votes(classes_.size(), 0.0);
        for (const Tree& tree : trees_) {
            votes[static_cast<std::size_t>(tree.walk(features).majority)] += 1.0;
        }
        const double n = static_cast<double>(trees_.size());
        for (double& v : votes) v /= n;
        Prediction p;
        p.probabilities = std::move(votes);
        p.label = argmax_lowest(p.probabilities);
        return p;
    }

private:
    std::vector<Tree> trees_;
};

class TreeModel final : public TrainedModel {
public:
    TreeModel(ModelConfig config, std::vector<std::string> schema,
              std::vector<std::string> classes, Tree tree)
        : TrainedModel(ModelKind::tree, std::move(config), std::move(schema),
                       std::move(classes)),
          tree_(std::move(tree)) {}

    json params() const { return json{{"tree", tree_to_json(tree_)}}; }

protected:
    Prediction predict_checked(std::span<const double> features) const override {
        const TreeNode& leaf = tree_.walk(features);
        Prediction p;
        p.probabilities = leaf.freq;
        p.label = argmax_lowest(p.probabilities);
        return p;
    }

private:
    Tree tree_;
};

class KnnModel final : public TrainedModel {
public:
    KnnModel(ModelConfig config, std::vector<std::string> schema,
             std::vector<std::string> classes, std::vector<double> mins,
             std::vector<double> ranges, std::vector<double> matrix, std::vector<int> labels)
        : TrainedModel(ModelKind::knn, std::move(config), std::move(schema), std::move(classes)),
          mins_(std::move(mins)),
          ranges_(std::move(ranges)),
          matrix_(std::move(matrix)),
          labels_(std::move(labels)) {}

    json params() const {
        return json{{"mins", mins_}, {"ranges", ranges_}, {"matrix", matrix_},
                    {"labels", labels_}};
    }

protected:
    Prediction predict_checked(std::span<const double> features) const override {
        const std::size_t n_features = schema_.size();
        const std::size_t n_rows = labels_.size();

        std::vector<double> query(n_features);
        for (std::size_t f = 0; f < n_features; ++f) {
            query[f] = ranges_[f] > 0.0 ? (features[f] - mins_[f]) / ranges_[f] : 0.0;
        }

        std::vector<std::pair<double, std::size_t>> distances;
        distances.reserve(n_rows);
        for (std::size_t r = 0; r < n_rows; ++r) {
            double d2 = 0.0;
            const double* row = matrix_.data() + r * n_features;
            for (std::size_t f = 0; f < n_features; ++f) {
                const double d = query[f] - row[f];
                d2 += d * d;
            }
            distances.emplace_back(d2, r);
        }
        std::sort(distances.begin(), distances.end());  // ties by row index

        const std::size_t k = std::min<std::size_t>(
            static_cast<std::size_t>(std::max(config_.knn_k, 1)), n_rows);
        std::vector<double> votes(classes_.size(), 0.0);
        for (std::size_t i = 0; i < k; ++i) {
            votes[static_cast<std::size_t>(labels_[distances[i].second])] += 1.0;
        }
        for (double& v : votes) v /= static_cast<double>(k);

        Prediction p;
        p.probabilities = std::move(votes);
        p.label = argmax_lowest(p.probabilities);
        return p;
    }

private:
    std::vector<double> mins_;
    std::vector<double> ranges_;
    std::vector<double> matrix_;  // row-major, min-max normalized
    std::vector<int> labels_;
};

class NbModel final : public TrainedModel {
public:
    NbModel(ModelConfig config, std::vector<std::string> schema, std::vector<std::string> classes,
            std::vector<double> priors, std::vector<std::vector<double>> means,
            std::vector<std::vector<double>> vars)
        : TrainedModel(ModelKind::nb, std::move(config), std::move(schema), std::move(classes)),
          priors_(std::move(priors)),
          means_(std::move(means)),
          vars_(std::move(vars)) {}

    json params() const {
        return json{{"priors", priors_}, {"means", means_}, {"vars", vars_}};
    }

protected:
    Prediction predict_checked(std::span<const double> features) const override {
        const std::size_t n_classes = classes_.size();
        std::vector<double> log_lik(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c) {
            double ll = priors_[c] > 0.0 ? std::log(priors_[c])
                                         : -std::numeric_limits<double>::infinity();
            for (std::size_t f = 0; f < schema_.size(); ++f) {
                const double var = vars_[c][f];
                const double d = features[f] - means_[c][f];
                ll += -0.5 * std::log(2.0 * std::numbers::pi * var) - d * d / (2.0 * var);
            }
            log_lik[c] = ll;
        }
        const double shift = *std::max_element(log_lik.begin(), log_lik.end());
        double total = 0.0;
        std::vector<double> probs(n_classes);
        for (std::size_t c = 0; c < n_classes; ++c) {
            probs[c] = std::isfinite(log_lik[c]) ? std::exp(log_lik[c] - shift) : 0.0;
            total += probs[c];
        }
        for (double& p : probs) p /= total;

        Prediction p;
        p.probabilities = std::move(probs);
        p.label = argmax_lowest(p.probabilities);
        return p;
    }

private:
    std::vector<double> priors_;
    std::vector<std::vector<double>> means_;  // [class][feature]
    std::vector<std::vector<double>> vars_;
};

class HierModel final : public TrainedModel {
public:
    HierModel(ModelConfig config, std::vector<std::string> schema,
              std::unique_ptr<TrainedModel> main, std::unique_ptr<TrainedModel> side)
        : TrainedModel(ModelKind::hierarchical, std::move(config), std::move(schema),
                       {std::string(kActivityClassNames[0]), std::string(kActivityClassNames[1]),
                        std::string(kActivityClassNames[2]), std::string(kActivityClassNames[3])}),
          main_(std::move(main)),
          side_(std::move(side)) {}

    bool needs_x_features() const override { return true; }

    const TrainedModel& main_model() const { return *main_; }
    const TrainedModel& side_model() const { return *side_; }

protected:
    Prediction predict_checked(std::span<const double> features) const override {
        const std::size_t full_size = main_->schema().size();
        const Prediction main_pred = main_->predict(features.subspan(0, full_size));
        const Prediction side_pred = side_->predict(features.subspan(full_size));

        const auto main_index = [&](std::string_view name) {
            const auto& cls = main_->classes();
            return static_cast<std::size_t>(
                std::find(cls.begin(), cls.end(), name) - cls.begin());
        };
        const auto side_index = [&](std::string_view name) {
            const auto& cls = side_->classes();
            return static_cast<std::size_t>(
                std::find(cls.begin(), cls.end(), name) - cls.begin());
        };

        const double p_lateral = main_pred.probabilities[main_index(kSuperClassNames[0])];
        Prediction p;
        p.probabilities.assign(4, 0.0);
        p.probabilities[0] = main_pred.probabilities[main_index("staying")];
        p.probabilities[1] = p_lateral * side_pred.probabilities[side_index("left")];
        p.probabilities[2] = p_lateral * side_pred.probabilities[side_index("right")];
        p.probabilities[3] = main_pred.probabilities[main_index("fake_move")];

        // Label follows the two-stage gate: the side model is consulted only
        // when the main model says lateral_move.
        const std::string& main_label =
            main_->classes()[static_cast<std::size_t>(main_pred.label)];
        if (main_label == kSuperClassNames[0]) {
            const std::string& side_label =
                side_->classes()[static_cast<std::size_t>(side_pred.label)];
            p.label = side_label == "left" ? 1 : 2;
        } else {
            p.label = main_label == "staying" ? 0 : 3;
        }
        return p;
    }

private:
    std::unique_ptr<TrainedModel> main_;
    std::unique_ptr<TrainedModel> side_;
};

// ---------------------------------------------------------------------------
// Training

void validate_config(const ModelConfig& config) {
    if (config.trees < 1) throw ConfigError("trees must be >= 1");
    if (config.n_features < 1) throw ConfigError("n_features must be >= 1");
    if (config.knn_k < 1) throw ConfigError("knn k must be >= 1");
    if (config.min_leaf < 1) throw ConfigError("min_leaf must be >= 1");
}

void validate_dataset(const dataset::FeatureDataset& ds) {
    if (ds.rows.empty()) throw DataError("cannot train on an empty dataset");
    if (ds.schema.empty()) throw DataError("cannot train on a dataset with no features");
}

std::vector<Tree> train_trees(const ModelConfig& config, const dataset::FeatureDataset& ds,
                              bool subsample_features) {
    const int n_classes = static_cast<int>(ds.class_names.size());
    const int candidates =
        subsample_features ? std::min<int>(config.n_features,
                                           static_cast<int>(ds.schema.size()))
                           : 0;

    std::vector<Tree> trees(static_cast<std::size_t>(config.trees));
    parallel_for(config.trees, config.threads, [&](int t) {
        std::mt19937_64 rng(mix64(config.seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> bootstrap(ds.rows.size());
        for (std::size_t& idx : bootstrap) idx = draw_index(rng, ds.rows.size());
        TreeBuilder builder(ds, n_classes, candidates, config.min_leaf, rng);
        trees[static_cast<std::size_t>(t)] = builder.build(std::move(bootstrap));
    });
    return trees;
}

std::unique_ptr<TrainedModel> train_flat(const ModelConfig& config,
                                         const dataset::FeatureDataset& ds) {
    validate_config(config);
    validate_dataset(ds);

    switch (config.kind) {
        case ModelKind::rf:
        case ModelKind::bagging: {
            std::vector<Tree> trees =
                train_trees(config, ds, /*subsample_features=*/config.kind == ModelKind::rf);
            return std::make_unique<ForestModel>(config.kind, config, ds.schema, ds.class_names,
                                                 std::move(trees));
        }
        case ModelKind::tree: {
            std::mt19937_64 rng(mix64(config.seed, 0));
            std::vector<std::size_t> all(ds.rows.size());
            for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
            TreeBuilder builder(ds, static_cast<int>(ds.class_names.size()), 0, config.min_leaf,
                                rng);
            return std::make_unique<TreeModel>(config, ds.schema, ds.class_names,
                                               builder.build(std::move(all)));
        }
        case ModelKind::knn: {
            const std::size_t n_features = ds.schema.size();
            std::vector<double> mins(n_features, std::numeric_limits<double>::infinity());
            std::vector<double> maxs(n_features, -std::numeric_limits<double>::infinity());
            for (const dataset::Row& row : ds.rows) {
                for (std::size_t f = 0; f < n_features; ++f) {
                    mins[f] = std::min(mins[f], row.values[f]);
                    maxs[f] = std::max(maxs[f], row.values[f]);
                }
            }
            std::vector<double> ranges(n_features);
            for (std::size_t f = 0; f < n_features; ++f) ranges[f] = maxs[f] - mins[f];

            std::vector<double> matrix;
            matrix.reserve(ds.rows.size() * n_features);
            std::vector<int> labels;
            labels.reserve(ds.rows.size());
            for (const dataset::Row& row : ds.rows) {
                for (std::size_t f = 0; f < n_features; ++f) {
                    matrix.push_back(ranges[f] > 0.0 ? (row.values[f] - mins[f]) / ranges[f]
                                                     : 0.0);
                }
                labels.push_back(row.label);
            }
            return std::make_unique<KnnModel>(config, ds.schema, ds.class_names, std::move(mins),
                                              std::move(ranges), std::move(matrix),
                                              std::move(labels));
        }
        case ModelKind::nb: {
            const std::size_t n_classes = ds.class_names.size();
            const std::size_t n_features = ds.schema.size();
            std::vector<double> priors(n_classes, 0.0);
            std::vector<std::vector<double>> means(n_classes,
                                                   std::vector<double>(n_features, 0.0));
            std::vector<std::vector<double>> vars(n_classes,
                                                  std::vector<double>(n_features, 0.0));
            std::vector<std::size_t> counts(n_classes, 0);
            for (const dataset::Row& row : ds.rows) {
                const std::size_t c = static_cast<std::size_t>(row.label);
                counts[c]++;
                for (std::size_t f = 0; f < n_features; ++f) means[c][f] += row.values[f];
            }
            for (std::size_t c = 0; c < n_classes; ++c) {
                if (counts[c] == 0) continue;
                for (std::size_t f = 0; f < n_features; ++f) {
                    means[c][f] /= static_cast<double>(counts[c]);
                }
            }
            for (const dataset::Row& row : ds.rows) {
                const std::size_t c = static_cast<std::size_t>(row.label);
                for (std::size_t f = 0; f < n_features; ++f) {
                    const double d = row.values[f] - means[c][f];
                    vars[c][f] += d * d;
                }
            }
            for (std::size_t c = 0; c < n_classes; ++c) {
                priors[c] = static_cast<double>(counts[c]) / static_cast<double>(ds.rows.size());
                for (std::size_t f = 0; f < n_features; ++f) {
                    vars[c][f] = counts[c] == 0
                                     ? kVarianceFloor
                                     : std::max(vars[c][f] / static_cast<double>(counts[c]),
                                                kVarianceFloor);
                }
            }
            return std::make_unique<NbModel>(config, ds.schema, ds.class_names, std::move(priors),
                                             std::move(means), std::move(vars));
        }
        case ModelKind::hierarchical:
            throw ConfigError("hierarchical models need train_hierarchical with x-features");
    }
    throw ConfigError("unknown model kind");
}

}  // namespace

std::optional<ModelKind> model_kind_from_string(std::string_view token) {
    if (token == "rf") return ModelKind::rf;
    if (token == "bagging") return ModelKind::bagging;
    if (token == "tree") return ModelKind::tree;
    if (token == "knn") return ModelKind::knn;
    if (token == "nb") return ModelKind::nb;
    if (token == "hier" || token == "hierarchical") return ModelKind::hierarchical;
    return std::nullopt;
}

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::rf: return "rf";
        case ModelKind::bagging: return "bagging";
        case ModelKind::tree: return "tree";
        case ModelKind::knn: return "knn";
        case ModelKind::nb: return "nb";
        case ModelKind::hierarchical: return "hier";
    }
    return "rf";
}

Prediction TrainedModel::predict(std::span<const double> features) const {
    if (features.size() != schema_.size()) {
        throw DataError("feature vector has " + std::to_string(features.size()) +
                        " values, model expects " + std::to_string(schema_.size()));
    }
    return predict_checked(features);
}

std::unique_ptr<TrainedModel> train(const ModelConfig& config,
                                    const dataset::FeatureDataset& ds) {
    return train_flat(config, ds);
}

std::unique_ptr<TrainedModel> train_hierarchical(const HierarchicalConfig& config,
                                                 const dataset::FeatureDataset& full,
                                                 const dataset::FeatureDataset& x_feats) {
    if (full.rows.size() != x_feats.rows.size()) {
        throw DataError("hierarchical training needs row-aligned full and x-feature datasets");
    }
    if (full.class_names.size() != 4) {
        throw DataError("hierarchical training needs the flat 4-class dataset");
    }
    for (std::size_t i = 0; i < full.rows.size(); ++i) {
        const std::string& a = full.class_names[static_cast<std::size_t>(full.rows[i].label)];
        const std::string& b =
            x_feats.class_names[static_cast<std::size_t>(x_feats.rows[i].label)];
        if (a != b) throw DataError("hierarchical training datasets disagree on row labels");
    }

    // Main model: collapse jumps into lateral_move.
    dataset::FeatureDataset main_ds;
    main_ds.schema = full.schema;
    main_ds.class_names.assign(kSuperClassNames.begin(), kSuperClassNames.end());
    main_ds.rows.reserve(full.rows.size());
    for (const dataset::Row& row : full.rows) {
        const auto cls = activity_from_string(
            full.class_names[static_cast<std::size_t>(row.label)]);
        dataset::Row mapped;
        mapped.values = row.values;
        mapped.label = main_ds.class_index(super_class_of(*cls));
        main_ds.rows.push_back(std::move(mapped));
    }

    // Side model: left/right over the lateral rows only.
    dataset::FeatureDataset side_ds;
    side_ds.schema = x_feats.schema;
    side_ds.class_names.assign(kSideClassNames.begin(), kSideClassNames.end());
    for (std::size_t i = 0; i < x_feats.rows.size(); ++i) {
        const auto cls = activity_from_string(
            x_feats.class_names[static_cast<std::size_t>(x_feats.rows[i].label)]);
        const auto side = side_of(*cls);
        if (!side) continue;
        dataset::Row mapped;
        mapped.values = x_feats.rows[i].values;
        mapped.label = side_ds.class_index(*side);
        side_ds.rows.push_back(std::move(mapped));
    }
    if (side_ds.rows.empty()) {
        throw DataError("hierarchical training needs lateral rows for the side model");
    }

    std::unique_ptr<TrainedModel> main = train_flat(config.main, main_ds);
    std::unique_ptr<TrainedModel> side = train_flat(config.side, side_ds);

    std::vector<std::string> schema = full.schema;
    schema.insert(schema.end(), x_feats.schema.begin(), x_feats.schema.end());

    ModelConfig snapshot = config.main;
    snapshot.kind = ModelKind::hierarchical;
    return std::make_unique<HierModel>(snapshot, std::move(schema), std::move(main),
                                       std::move(side));
}

// ---------------------------------------------------------------------------
// Persistence

namespace {

// threads is a runtime knob, not a model parameter; leaving it out keeps
// model files byte-identical across worker counts.
json config_to_json(const ModelConfig& config) {
    return json{{"kind", std::string(to_string(config.kind))},
                {"trees", config.trees},
                {"n_features", config.n_features},
                {"knn_k", config.knn_k},
                {"min_leaf", config.min_leaf},
                {"seed", config.seed}};
}

ModelConfig config_from_json(const json& j) {
    ModelConfig config;
    const auto kind = model_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw DataError("model file has unknown kind");
    config.kind = *kind;
    config.trees = j.at("trees").get<int>();
    config.n_features = j.at("n_features").get<int>();
    config.knn_k = j.at("knn_k").get<int>();
    config.min_leaf = j.at("min_leaf").get<int>();
    config.seed = j.at("seed").get<std::uint64_t>();
    config.threads = 1;
    return config;
}

json model_to_json(const TrainedModel& model);

json params_of(const TrainedModel& model) {
    switch (model.kind()) {
        case ModelKind::rf:
        case ModelKind::bagging:
            return static_cast<const ForestModel&>(model).params();
        case ModelKind::tree: return static_cast<const TreeModel&>(model).params();
        case ModelKind::knn: return static_cast<const KnnModel&>(model).params();
        case ModelKind::nb: return static_cast<const NbModel&>(model).params();
        case ModelKind::hierarchical: {
            const auto& hier = static_cast<const HierModel&>(model);
            return json{{"main", model_to_json(hier.main_model())},
                        {"side", model_to_json(hier.side_model())}};
        }
    }
    throw ConfigError("unknown model kind");
}

json model_to_json(const TrainedModel& model) {
    return json{{"format", kModelFileFormat},
                {"version", kModelFileVersion},
                {"kind", std::string(to_string(model.kind()))},
                {"config", config_to_json(model.config())},
                {"schema", model.schema()},
                {"classes", model.classes()},
                {"params", params_of(model)}};
}

std::unique_ptr<TrainedModel> model_from_json(const json& j) {
    if (!j.is_object() || j.value("format", std::string()) != kModelFileFormat) {
        throw DataError("not a model file");
    }
    if (j.at("version").get<int>() != kModelFileVersion) {
        throw DataError("unsupported model file version " + j.at("version").dump());
    }
    const auto kind = model_kind_from_string(j.at("kind").get<std::string>());
    if (!kind) throw DataError("model file has unknown kind '" + j.at("kind").dump() + "'");

    ModelConfig config = config_from_json(j.at("config"));
    auto schema = j.at("schema").get<std::vector<std::string>>();
    auto classes = j.at("classes").get<std::vector<std::string>>();
    const json& params = j.at("params");

    switch (*kind) {
        case ModelKind::rf:
        case ModelKind::bagging: {
            std::vector<Tree> trees;
            for (const json& t : params.at("trees")) trees.push_back(tree_from_json(t));
            return std::make_unique<ForestModel>(*kind, std::move(config), std::move(schema),
                                                 std::move(classes), std::move(trees));
        }
        case ModelKind::tree:
            return std::make_unique<TreeModel>(std::move(config), std::move(schema),
                                               std::move(classes),
                                               tree_from_json(params.at("tree")));
        case ModelKind::knn:
            return std::make_unique<KnnModel>(
                std::move(config), std::move(schema), std::move(classes),
                params.at("mins").get<std::vector<double>>(),
                params.at("ranges").get<std::vector<double>>(),
                params.at("matrix").get<std::vector<double>>(),
                params.at("labels").get<std::vector<int>>());
        case ModelKind::nb:
            return std::make_unique<NbModel>(
                std::move(config), std::move(schema), std::move(classes),
                params.at("priors").get<std::vector<double>>(),
                params.at("means").get<std::vector<std::vector<double>>>(),
                params.at("vars").get<std::vector<std::vector<double>>>());
        case ModelKind::hierarchical: {
            auto main = model_from_json(params.at("main"));
            auto side = model_from_json(params.at("side"));
            return std::make_unique<HierModel>(std::move(config), std::move(schema),
                                               std::move(main), std::move(side));
        }
    }
    throw DataError("unknown model kind in file");
}

}  // namespace

void save_model(const TrainedModel& model, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << model_to_json(model).dump(1, '\t') << '\n';
    if (!out) throw IoError("failed writing " + path);
}

std::unique_ptr<TrainedModel> load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw DataError(path + ": invalid model file: " + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const json::exception& e) {
        throw DataError(path + ": invalid model file: " + e.what());
    }
}

}  // namespace harkit::models
