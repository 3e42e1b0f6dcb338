#pragma once

// Independent reference implementations used to cross-check the library.
// These deliberately take different computational routes (naive O(N^2) DFT,
// raw-moment expansions, selection-based medians) and must stay decoupled
// from the code under test.

#include <cstddef>
#include <span>
#include <vector>

namespace oracle {

struct DftMags {
    std::vector<double> mags;
};

// Direct O(N^2) DFT with long double accumulation, any length.
std::vector<double> naive_dft_magnitudes(std::span<const double> series);

double mean(std::span<const double> series);
double variance(std::span<const double> series);  // E[x^2] - mean^2 route
double minimum(std::span<const double> series);
double maximum(std::span<const double> series);
double pearson(std::span<const double> a, std::span<const double> b);
double sma3(std::span<const double> x, std::span<const double> y, std::span<const double> z);
double median(std::vector<double> values);  // selection-based
double mad(std::span<const double> series);
double aptd(std::span<const double> series);
double kurtosis(std::span<const double> series);  // raw-moment expansion
double energy_squared_sum(std::span<const double> series);
double entropy_log10(std::span<const double> series);
std::vector<double> quarter_means(std::span<const double> series);
long minmax_pos_diff(std::span<const double> series);

// Best achievable training accuracy of any axis-aligned threshold tree grown
// to purity, memoized over row subsets. Rows <= 16.
double exhaustive_tree_accuracy(const std::vector<std::vector<double>>& rows,
                                const std::vector<int>& labels);

}  // namespace oracle
