#pragma once

// Canonical file schemas, ingestion/validation, distribution summaries and
// stratified fold construction. Datasets are immutable after load and freely
// shareable across threads.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "harkit/features.hpp"
#include "harkit/signal.hpp"

namespace harkit::dataset {

inline constexpr char kRawHeader[] =
    "timestamp_ms,acc_x,acc_y,acc_z,gyr_x,gyr_y,gyr_z,mag_x,mag_y,mag_z,label,window_id";

struct WindowSource {
    long first_line = 0;  // 1-based line numbers in the source file
    long last_line = 0;
};

struct RawDataset {
    std::vector<signal::SensorWindow> windows;
    std::string source_file;
    std::vector<WindowSource> sources;  // parallel to windows
    long data_rows = 0;                 // rows parsed, always windows*64 on success
};

struct Row {
    std::vector<double> values;
    int label = 0;  // index into FeatureDataset::class_names
};

struct FeatureDataset {
    std::vector<std::string> schema;       // feature columns, class column excluded
    std::vector<std::string> class_names;  // ordered label universe
    std::vector<Row> rows;

    std::size_t n_features() const { return schema.size(); }
    int feature_index(std::string_view name) const;  // -1 when absent
    int class_index(std::string_view name) const;    // -1 when absent
    std::vector<std::size_t> class_counts() const;
};

// Deterministic class ordering: known taxonomies keep their fixed order,
// anything else sorts lexicographically.
std::vector<std::string> canonical_class_order(std::vector<std::string> present);

// Loads the canonical raw CSV, grouping rows into complete labeled 64-sample
// windows by window_id. Malformed rows, unknown labels and incomplete windows
// raise DataError with the offending line number.
RawDataset load_raw(const std::string& path);

// Same file format, but returns the flat sample stream (label and window_id
// columns ignored) for replay.
std::vector<signal::SensorSample> load_raw_stream(const std::string& path);

enum class SchemaId { any, full103, reduced94, xaxis72 };

// Loads a feature CSV. With an explicit SchemaId the header must match that
// schema exactly; mismatches raise DataError listing missing/extra columns.
FeatureDataset load_features(const std::string& path, SchemaId expect = SchemaId::any);

void save_features(const FeatureDataset& ds, const std::string& path);

struct FeatureSummary {
    std::string name;
    double min = 0.0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double mean = 0.0;
    std::size_t outliers = 0;  // beyond q1/q3 -/+ 1.5*IQR
};

struct DistributionSummary {
    std::vector<FeatureSummary> features;
    std::vector<std::pair<std::string, std::size_t>> class_counts;
};

// Quartiles by linear interpolation between order statistics.
DistributionSummary summarize(const FeatureDataset& ds);

// k disjoint index sets partitioning all rows; per-class counts across folds
// differ by at most one. Deterministic for a fixed seed.
std::vector<std::vector<std::size_t>> stratified_folds(const FeatureDataset& ds, int k,
                                                       std::uint64_t seed);

FeatureDataset drop_features(const FeatureDataset& ds, std::span<const std::string> names);

// Feature extraction over every window of a raw dataset.
FeatureDataset extract_dataset(const RawDataset& raw, const signal::FilterConfig& filters);
FeatureDataset extract_x_dataset(const RawDataset& raw, const signal::FilterConfig& filters);

}  // namespace harkit::dataset
