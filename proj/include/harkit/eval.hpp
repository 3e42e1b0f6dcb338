#pragma once

// Cross-validation driver, metrics, feature ranking and the experiment
// runner behind the `eval` subcommand.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "harkit/dataset.hpp"
#include "harkit/models.hpp"

namespace harkit::eval {

// Default seed for every subcommand; override with --seed or the experiment
// spec's seed key.
inline constexpr std::uint64_t kDefaultSeed = 42;

struct MetricsReport {
    std::vector<std::string> classes;
    std::vector<std::vector<std::size_t>> confusion;  // [actual][predicted]
    std::size_t total = 0;
    double accuracy = 0.0;
    std::vector<double> precision;  // per class, 0 when undefined
    std::vector<double> recall;
    std::vector<double> f1;
    double weighted_precision = 0.0;
    double weighted_recall = 0.0;  // equals accuracy by construction
    double weighted_f1 = 0.0;
    double mae = 0.0;   // mean over instances and classes of |p - y|
    double rmse = 0.0;
};

// abs_prob_errors holds |p_ic - y_ic| flattened over instances and classes;
// it may be empty when probability metrics are not wanted.
MetricsReport metrics_from_confusion(const std::vector<std::vector<std::size_t>>& confusion,
                                     const std::vector<std::string>& classes,
                                     std::span<const double> abs_prob_errors = {});

// k rounds over stratified folds, confusion aggregated over all held-out
// predictions. Deterministic for a fixed seed.
MetricsReport cross_validate(const models::ModelConfig& config,
                             const dataset::FeatureDataset& ds, int k = 10,
                             std::uint64_t seed = kDefaultSeed);

MetricsReport cross_validate_with_folds(const models::ModelConfig& config,
                                        const dataset::FeatureDataset& ds,
                                        const std::vector<std::vector<std::size_t>>& folds);

struct RankedFeatures {
    std::vector<std::pair<std::string, double>> entries;  // descending score
};

// Information gain of each feature after equal-width discretization over its
// observed range. Ties keep schema order.
RankedFeatures info_gain_rank(const dataset::FeatureDataset& ds, int bins = 10);

struct ElbowPoint {
    int trees = 0;
    double accuracy = 0.0;
};

struct ElbowCurve {
    std::vector<ElbowPoint> points;
    std::uint64_t fold_fingerprint = 0;  // identical folds across the sweep
};

ElbowCurve elbow_sweep(const dataset::FeatureDataset& ds, std::span<const int> tree_counts,
                       models::ModelConfig config, int k = 10,
                       std::uint64_t seed = kDefaultSeed);

std::uint64_t fold_fingerprint(const std::vector<std::vector<std::size_t>>& folds);

struct ExperimentSpec {
    std::string name = "experiment";
    std::string raw_path;       // extract with filters, or ...
    std::string features_path;  // ... load precomputed features
    std::string schema = "full103";  // full103 | reduced94
    signal::FilterConfig filters;
    models::ModelConfig model;
    models::ModelConfig side_model;  // hier only
    int folds = 10;
    std::uint64_t seed = kDefaultSeed;
};

// Flat key = value format, '#' comments. Unknown keys raise ConfigError.
ExperimentSpec parse_experiment(const std::string& path);
ExperimentSpec parse_experiment_text(const std::string& text, const std::string& origin);

struct ExperimentResult {
    MetricsReport metrics;
    // Full resolved configuration, in emission order, for reproducibility.
    std::vector<std::pair<std::string, std::string>> provenance;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

// Human-readable table with percentages at 2 decimals.
std::string format_report_table(const ExperimentResult& result);

// Machine CSV: key,value rows under a schema-version header line.
void write_report_csv(const ExperimentResult& result, const std::string& path);

}  // namespace harkit::eval
