#pragma once

// Per-window feature computations and the canonical 102-column feature
// vector, plus the accelerometer-x sub-feature set used by the side model.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "harkit/signal.hpp"

namespace harkit::features {

inline constexpr char kClassColumn[] = "activity-class";

// Canonical feature column names, in the fixed dataset order. full_schema()
// has 102 entries; appending the class column gives the 103-attribute layout.
const std::vector<std::string>& full_schema();

// The nine columns removed for the reduced 94-attribute layout.
const std::vector<std::string>& reduced_drop_list();

// full_schema() minus reduced_drop_list(), order preserved (93 entries).
const std::vector<std::string>& reduced_schema();

// Column names of the accelerometer-x sub-feature set (72 entries).
const std::vector<std::string>& x_schema();

struct BasicStats {
    double min = 0.0;
    double mean = 0.0;
    double max = 0.0;
    double variance = 0.0;  // population (divide by N)
    double std_dev = 0.0;
};

BasicStats basic_stats(std::span<const double> series);

// Population covariance over the product of population standard deviations;
// 0 when either deviation is 0.
double pearson_corr(std::span<const double> a, std::span<const double> b);

// Sum of per-sample 3-axis vector magnitudes, unnormalized.
double sma(std::span<const double> x, std::span<const double> y, std::span<const double> z);

// Median absolute deviation; even-length medians average the two central
// order statistics.
double mad(std::span<const double> series);

// Mean absolute amplitude change between consecutive alternating extrema.
// Endpoints always count as extrema; an interior peak is strictly greater
// than its left neighbor and >= its right neighbor, troughs symmetric.
// 0 when there are fewer than two extrema.
double aptd(std::span<const double> series);

// Excess kurtosis with population moments; 0 for zero-variance input.
double kurtosis(std::span<const double> series);

enum class EnergyVariant {
    squared_sum,     // (sum of coefficient magnitudes)^2, the default
    sum_of_squares,  // sum of squared magnitudes, opt-in
};

double spectral_energy(std::span<const double> series,
                       EnergyVariant variant = EnergyVariant::squared_sum);

// Shannon entropy (log10) of the magnitude spectrum normalized to a
// distribution; 0*log 0 = 0 and the all-zero series maps to 0.
double spectral_entropy(std::span<const double> series);

// Means of the four equal quarters of the series.
std::array<double, 4> quarter_means(std::span<const double> series);

// argmax index minus argmin index, ties broken by first occurrence.
long minmax_pos_diff(std::span<const double> series);

struct FeatureVector {
    std::vector<double> values;  // one per full_schema() entry
    std::optional<ActivityClass> label;
};

struct XAxisFeatureVector {
    std::array<double, signal::kWindowSize> raw{};
    double min = 0.0;
    double max = 0.0;
    std::array<double, 4> quarter_means{};
    double amp_range = 0.0;       // max - min
    double minmax_pos_diff = 0.0; // signed sample-index difference
    std::optional<ActivityClass> label;

    // Values in x_schema() order.
    std::vector<double> flatten() const;
};

// Applies the filter chain and emits all 102 features in schema order. Throws
// DataError naming the feature if any computed value is not finite.
FeatureVector extract_features(const signal::SensorWindow& window,
                               const signal::FilterConfig& filters,
                               EnergyVariant energy = EnergyVariant::squared_sum);

// The accelerometer-x sub-feature set over the same filtered series.
XAxisFeatureVector extract_x_features(const signal::SensorWindow& window,
                                      const signal::FilterConfig& filters);

}  // namespace harkit::features
