#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

namespace oracle {

std::vector<double> naive_dft_magnitudes(std::span<const double> series) {
    const std::size_t n = series.size();
    std::vector<double> mags(n);
    for (std::size_t k = 0; k < n; ++k) {
        long double re = 0.0L;
        long double im = 0.0L;
        for (std::size_t t = 0; t < n; ++t) {
            const long double angle = -2.0L * std::numbers::pi_v<long double> *
                                      static_cast<long double>(k) * static_cast<long double>(t) /
                                      static_cast<long double>(n);
            re += static_cast<long double>(series[t]) * std::cos(angle);
            im += static_cast<long double>(series[t]) * std::sin(angle);
        }
        mags[k] = static_cast<double>(std::sqrt(re * re + im * im));
    }
    return mags;
}

double mean(std::span<const double> series) {
    long double sum = 0.0L;
    for (double v : series) sum += v;
    return static_cast<double>(sum / static_cast<long double>(series.size()));
}

double variance(std::span<const double> series) {
    long double sum = 0.0L;
    long double sum_sq = 0.0L;
    for (double v : series) {
        sum += v;
        sum_sq += static_cast<long double>(v) * v;
    }
    const long double n = static_cast<long double>(series.size());
    const long double m = sum / n;
    return static_cast<double>(sum_sq / n - m * m);
}

double minimum(std::span<const double> series) {
    return *std::min_element(series.begin(), series.end());
}

double maximum(std::span<const double> series) {
    return *std::max_element(series.begin(), series.end());
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const long double n = static_cast<long double>(a.size());
    long double sa = 0.0L, sb = 0.0L, sab = 0.0L, saa = 0.0L, sbb = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sa += a[i];
        sb += b[i];
        sab += static_cast<long double>(a[i]) * b[i];
        saa += static_cast<long double>(a[i]) * a[i];
        sbb += static_cast<long double>(b[i]) * b[i];
    }
    const long double cov = sab / n - (sa / n) * (sb / n);
    const long double va = saa / n - (sa / n) * (sa / n);
    const long double vb = sbb / n - (sb / n) * (sb / n);
    if (va <= 0.0L || vb <= 0.0L) return 0.0;
    return static_cast<double>(cov / std::sqrt(va * vb));
}

double sma3(std::span<const double> x, std::span<const double> y, std::span<const double> z) {
    long double sum = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += std::sqrt(static_cast<long double>(x[i]) * x[i] +
                         static_cast<long double>(y[i]) * y[i] +
                         static_cast<long double>(z[i]) * z[i]);
    }
    return static_cast<double>(sum);
}

double median(std::vector<double> values) {
    const std::size_t n = values.size();
    const std::size_t mid = n / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<long>(mid), values.end());
    const double upper = values[mid];
    if (n % 2 == 1) return upper;
    std::nth_element(values.begin(), values.begin() + static_cast<long>(mid - 1), values.end());
    return 0.5 * (values[mid - 1] + upper);
}

double mad(std::span<const double> series) {
    const double med = median({series.begin(), series.end()});
    std::vector<double> deviations;
    deviations.reserve(series.size());
    for (double v : series) deviations.push_back(std::fabs(v - med));
    return median(std::move(deviations));
}

double aptd(std::span<const double> series) {
    const std::size_t n = series.size();
    std::vector<std::size_t> extrema_idx;
    for (std::size_t i = 0; i < n; ++i) {
        bool is_extremum = i == 0 || i == n - 1;
        if (!is_extremum) {
            if (series[i] > series[i - 1] && series[i] >= series[i + 1]) is_extremum = true;
            if (series[i] < series[i - 1] && series[i] <= series[i + 1]) is_extremum = true;
        }
        if (is_extremum) extrema_idx.push_back(i);
    }
    if (extrema_idx.size() < 2) return 0.0;
    long double total = 0.0L;
    for (std::size_t i = 1; i < extrema_idx.size(); ++i) {
        total += std::fabs(series[extrema_idx[i]] - series[extrema_idx[i - 1]]);
    }
    return static_cast<double>(total / static_cast<long double>(extrema_idx.size() - 1));
}

double kurtosis(std::span<const double> series) {
    // Raw moments: m2 = E[x^2]-mu^2, m4 = E[x^4]-4 mu E[x^3]+6 mu^2 E[x^2]-3 mu^4.
    long double s1 = 0.0L, s2 = 0.0L, s3 = 0.0L, s4 = 0.0L;
    for (double v : series) {
        const long double x = v;
        s1 += x;
        s2 += x * x;
        s3 += x * x * x;
        s4 += x * x * x * x;
    }
    const long double n = static_cast<long double>(series.size());
    const long double mu = s1 / n;
    const long double m2 = s2 / n - mu * mu;
    if (m2 <= 0.0L) return 0.0;
    const long double m4 =
        s4 / n - 4.0L * mu * (s3 / n) + 6.0L * mu * mu * (s2 / n) - 3.0L * mu * mu * mu * mu;
    return static_cast<double>(m4 / (m2 * m2) - 3.0L);
}

double energy_squared_sum(std::span<const double> series) {
    const std::vector<double> mags = naive_dft_magnitudes(series);
    long double sum = 0.0L;
    for (double m : mags) sum += m;
    return static_cast<double>(sum * sum);
}

double entropy_log10(std::span<const double> series) {
    const std::vector<double> mags = naive_dft_magnitudes(series);
    long double total = 0.0L;
    for (double m : mags) total += m;
    if (total == 0.0L) return 0.0;
    long double h = 0.0L;
    for (double m : mags) {
        if (m <= 0.0) continue;
        const long double p = static_cast<long double>(m) / total;
        h -= p * std::log10(p);
    }
    return static_cast<double>(h);
}

std::vector<double> quarter_means(std::span<const double> series) {
    const std::size_t q = series.size() / 4;
    std::vector<double> means(4, 0.0);
    for (std::size_t i = 0; i < series.size(); ++i) {
        means[std::min<std::size_t>(i / q, 3)] += series[i];
    }
    for (double& m : means) m /= static_cast<double>(q);
    return means;
}

long minmax_pos_diff(std::span<const double> series) {
    const auto lo = std::min_element(series.begin(), series.end());
    const auto hi = std::max_element(series.begin(), series.end());
    return static_cast<long>(hi - series.begin()) - static_cast<long>(lo - series.begin());
}

namespace {

struct Memo {
    const std::vector<std::vector<double>>* rows;
    const std::vector<int>* labels;
    std::map<std::uint32_t, std::size_t> cache;  // subset mask -> max correct

    std::size_t best_correct(std::uint32_t mask) {
        const auto cached = cache.find(mask);
        if (cached != cache.end()) return cached->second;

        std::map<int, std::size_t> counts;
        std::size_t total = 0;
        for (std::size_t i = 0; i < labels->size(); ++i) {
            if (mask & (1u << i)) {
                counts[(*labels)[i]]++;
                ++total;
            }
        }
        std::size_t majority = 0;
        for (const auto& [label, count] : counts) majority = std::max(majority, count);

        std::size_t best = majority;  // leaf
        if (counts.size() > 1) {
            const std::size_t n_features = (*rows)[0].size();
            for (std::size_t f = 0; f < n_features; ++f) {
                std::vector<double> values;
                for (std::size_t i = 0; i < labels->size(); ++i) {
                    if (mask & (1u << i)) values.push_back((*rows)[i][f]);
                }
                std::sort(values.begin(), values.end());
                values.erase(std::unique(values.begin(), values.end()), values.end());
                for (std::size_t v = 0; v + 1 < values.size(); ++v) {
                    const double threshold = 0.5 * (values[v] + values[v + 1]);
                    std::uint32_t left = 0, right = 0;
                    for (std::size_t i = 0; i < labels->size(); ++i) {
                        if (!(mask & (1u << i))) continue;
                        if ((*rows)[i][f] < threshold) {
                            left |= 1u << i;
                        } else {
                            right |= 1u << i;
                        }
                    }
                    if (left == 0 || right == 0) continue;
                    best = std::max(best, best_correct(left) + best_correct(right));
                }
            }
        }
        cache[mask] = best;
        return best;
    }
};

}  // namespace

double exhaustive_tree_accuracy(const std::vector<std::vector<double>>& rows,
                                const std::vector<int>& labels) {
    Memo memo{&rows, &labels, {}};
    const std::uint32_t full = rows.size() >= 32 ? 0xFFFFFFFFu
                                                 : ((1u << rows.size()) - 1u);
    return static_cast<double>(memo.best_correct(full)) / static_cast<double>(rows.size());
}

}  // namespace oracle
