#pragma once

// Classifiers with deterministic training: random forest, bagging, decision
// tree, KNN, Gaussian naive Bayes, and the two-stage hierarchical pipeline.
// Trained models are immutable and safe to share across threads.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "harkit/dataset.hpp"

namespace harkit::models {

enum class ModelKind { rf, bagging, tree, knn, nb, hierarchical };

std::optional<ModelKind> model_kind_from_string(std::string_view token);
std::string_view to_string(ModelKind kind);

struct ModelConfig {
    ModelKind kind = ModelKind::rf;
    int trees = 100;       // rf/bagging ensemble size
    int n_features = 10;   // rf per-node candidate features
    int knn_k = 30;        // neighbors, clamped to the training size
    int min_leaf = 1;
    std::uint64_t seed = 0;
    int threads = 1;       // tree-training parallelism; results are thread-count independent
};

struct Prediction {
    int label = 0;                      // index into classes()
    std::vector<double> probabilities;  // per class, sums to 1
};

class TrainedModel {
public:
    virtual ~TrainedModel() = default;

    // Throws DataError when the input length does not match the schema.
    Prediction predict(std::span<const double> features) const;

    ModelKind kind() const { return kind_; }
    const ModelConfig& config() const { return config_; }
    const std::vector<std::string>& schema() const { return schema_; }
    const std::vector<std::string>& classes() const { return classes_; }

    // Hierarchical models consume the full vector concatenated with the
    // accelerometer-x sub-feature vector.
    virtual bool needs_x_features() const { return false; }

protected:
    TrainedModel(ModelKind kind, ModelConfig config, std::vector<std::string> schema,
                 std::vector<std::string> classes)
        : kind_(kind),
          config_(std::move(config)),
          schema_(std::move(schema)),
          classes_(std::move(classes)) {}

    virtual Prediction predict_checked(std::span<const double> features) const = 0;

    ModelKind kind_;
    ModelConfig config_;
    std::vector<std::string> schema_;
    std::vector<std::string> classes_;
};

// Deterministic for a fixed config.seed, independent of config.threads.
// A single-class dataset trains a constant model; an empty dataset throws.
std::unique_ptr<TrainedModel> train(const ModelConfig& config, const dataset::FeatureDataset& ds);

struct HierarchicalConfig {
    ModelConfig main;  // over {lateral_move, staying, fake_move}, full features
    ModelConfig side;  // over {left, right}, accelerometer-x features
};

// full and x_feats must be row-aligned views of the same flat 4-class data.
std::unique_ptr<TrainedModel> train_hierarchical(const HierarchicalConfig& config,
                                                 const dataset::FeatureDataset& full,
                                                 const dataset::FeatureDataset& x_feats);

// Self-describing JSON container with version, config, schema, class list and
// parameters. Loaded models produce bit-identical predictions.
void save_model(const TrainedModel& model, const std::string& path);
std::unique_ptr<TrainedModel> load_model(const std::string& path);

}  // namespace harkit::models
