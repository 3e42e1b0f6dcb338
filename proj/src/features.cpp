#include "harkit/features.hpp"

#include <algorithm>
#include <cmath>

#include "harkit/error.hpp"

namespace harkit::features {

namespace {

// Column-name prefixes per sensor. The magnetometer keeps its historical
// "ori-angle" prefix on the per-axis stat columns for file compatibility; the
// remaining magnetometer columns use "mag".
constexpr const char* kStatPrefix[3] = {"acc", "gyr", "ori-angle"};
constexpr const char* kSensorPrefix[3] = {"acc", "gyr", "mag"};
constexpr const char* kAxisName[3] = {"x", "y", "z"};
constexpr const char* kStatName[5] = {"min", "mean", "max", "var", "std"};
constexpr const char* kPairName[3] = {"xy", "xz", "yz"};

std::vector<std::string> build_full_schema() {
    std::vector<std::string> names;
    names.reserve(102);
    for (int axis = 0; axis < 3; ++axis) {
        for (int stat = 0; stat < 5; ++stat) {
            for (int sensor = 0; sensor < 3; ++sensor) {
                names.push_back(std::string(kStatPrefix[sensor]) + "-" + kAxisName[axis] + "-" +
                                kStatName[stat]);
            }
        }
    }
    for (int sensor = 0; sensor < 3; ++sensor) {
        names.push_back(std::string(kSensorPrefix[sensor]) + "-sma");
    }
    for (int pair = 0; pair < 3; ++pair) {
        for (int sensor = 0; sensor < 3; ++sensor) {
            names.push_back(std::string(kSensorPrefix[sensor]) + "-pcorr-" + kPairName[pair]);
        }
    }
    names.push_back("acc-x-min-max-diff");
    names.push_back("acc-x-amprange");
    for (int q = 1; q <= 4; ++q) {
        names.push_back("acc-x-mean-" + std::to_string(q) + "quarter");
    }
    for (int axis = 0; axis < 3; ++axis) {
        for (int sensor = 0; sensor < 2; ++sensor) {  // acc and gyr only
            names.push_back(std::string(kSensorPrefix[sensor]) + "-" + kAxisName[axis] + "-aptd");
        }
    }
    for (int axis = 0; axis < 3; ++axis) {
        for (int sensor = 0; sensor < 2; ++sensor) {
            names.push_back(std::string(kSensorPrefix[sensor]) + "-" + kAxisName[axis] + "-mad");
        }
    }
    for (const char* suffix : {"energy", "entropy", "kurtosis"}) {
        for (int axis = 0; axis < 3; ++axis) {
            for (int sensor = 0; sensor < 3; ++sensor) {
                names.push_back(std::string(kSensorPrefix[sensor]) + "-" + kAxisName[axis] + "-" +
                                suffix);
            }
        }
    }
    return names;
}

std::vector<std::string> build_x_schema() {
    std::vector<std::string> names;
    names.reserve(72);
    for (int i = 0; i < signal::kWindowSize; ++i) {
        char buf[24];
        std::snprintf(buf, sizeof(buf), "acc-x-raw-%02d", i);
        names.emplace_back(buf);
    }
    names.push_back("acc-x-min");
    names.push_back("acc-x-max");
    for (int q = 1; q <= 4; ++q) {
        names.push_back("acc-x-mean-" + std::to_string(q) + "quarter");
    }
    names.push_back("acc-x-amprange");
    names.push_back("acc-x-min-max-diff");
    return names;
}

double median_sorted(std::vector<double>& values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

void require_nonempty(std::span<const double> series, const char* what) {
    if (series.empty()) throw DataError(std::string(what) + ": empty series");
}

}  // namespace

const std::vector<std::string>& full_schema() {
    static const std::vector<std::string> schema = build_full_schema();
    return schema;
}

const std::vector<std::string>& reduced_drop_list() {
    static const std::vector<std::string> names = {
        "acc-x-aptd", "acc-y-aptd", "acc-z-aptd", "gyr-x-aptd", "gyr-y-aptd",
        "gyr-z-aptd", "gyr-x-mad",  "gyr-y-mad",  "gyr-z-mad"};
    return names;
}

const std::vector<std::string>& reduced_schema() {
    static const std::vector<std::string> schema = [] {
        const auto& drop = reduced_drop_list();
        std::vector<std::string> out;
        for (const std::string& name : full_schema()) {
            if (std::find(drop.begin(), drop.end(), name) == drop.end()) out.push_back(name);
        }
        return out;
    }();
    return schema;
}

const std::vector<std::string>& x_schema() {
    static const std::vector<std::string> schema = build_x_schema();
    return schema;
}

BasicStats basic_stats(std::span<const double> series) {
    require_nonempty(series, "basic_stats");
    BasicStats s;
    s.min = series[0];
    s.max = series[0];
    double sum = 0.0;
    for (double v : series) {
        s.min = std::min(s.min, v);
        s.max = std::max(s.max, v);
        sum += v;
    }
    const double n = static_cast<double>(series.size());
    s.mean = sum / n;
    double sq = 0.0;
    for (double v : series) {
        const double d = v - s.mean;
        sq += d * d;
    }
    s.variance = sq / n;
    s.std_dev = std::sqrt(s.variance);
    return s;
}

double pearson_corr(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw DataError("pearson_corr: length mismatch");
    if (a.size() < 2) throw DataError("pearson_corr: need at least two samples");
    const BasicStats sa = basic_stats(a);
    const BasicStats sb = basic_stats(b);
    if (sa.std_dev == 0.0 || sb.std_dev == 0.0) return 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - sa.mean) * (b[i] - sb.mean);
    }
    cov /= static_cast<double>(a.size());
    return cov / (sa.std_dev * sb.std_dev);
}

double sma(std::span<const double> x, std::span<const double> y, std::span<const double> z) {
    if (x.size() != y.size() || x.size() != z.size()) throw DataError("sma: length mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += signal::magnitude(x[i], y[i], z[i]);
    }
    return sum;
}

double mad(std::span<const double> series) {
    require_nonempty(series, "mad");
    std::vector<double> values(series.begin(), series.end());
    const double med = median_sorted(values);
    for (double& v : values) v = std::abs(v - med);
    return median_sorted(values);
}

double aptd(std::span<const double> series) {
    require_nonempty(series, "aptd");
    const std::size_t n = series.size();

    std::vector<double> extrema;
    extrema.push_back(series[0]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const bool peak = series[i] > series[i - 1] && series[i] >= series[i + 1];
        const bool trough = series[i] < series[i - 1] && series[i] <= series[i + 1];
        if (peak || trough) extrema.push_back(series[i]);
    }
    if (n > 1) extrema.push_back(series[n - 1]);

    if (extrema.size() < 2) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 1; i < extrema.size(); ++i) {
        sum += std::abs(extrema[i] - extrema[i - 1]);
    }
    return sum / static_cast<double>(extrema.size() - 1);
}

double kurtosis(std::span<const double> series) {
    require_nonempty(series, "kurtosis");
    const BasicStats s = basic_stats(series);
    if (s.variance == 0.0) return 0.0;
    double m4 = 0.0;
    for (double v : series) {
        const double d = v - s.mean;
        m4 += d * d * d * d;
    }
    m4 /= static_cast<double>(series.size());
    return m4 / (s.variance * s.variance) - 3.0;
}

double spectral_energy(std::span<const double> series, EnergyVariant variant) {
    const std::vector<double> mags = signal::fft_magnitudes(series);
    double sum = 0.0;
    if (variant == EnergyVariant::sum_of_squares) {
        for (double m : mags) sum += m * m;
        return sum;
    }
    for (double m : mags) sum += m;
    return sum * sum;
}

double spectral_entropy(std::span<const double> series) {
    const std::vector<double> mags = signal::fft_magnitudes(series);
    double total = 0.0;
    for (double m : mags) total += m;
    if (total == 0.0) return 0.0;
    double h = 0.0;
    for (double m : mags) {
        if (m == 0.0) continue;
        const double p = m / total;
        h -= p * std::log10(p);
    }
    return h;
}

std::array<double, 4> quarter_means(std::span<const double> series) {
    if (series.empty() || series.size() % 4 != 0) {
        throw DataError("quarter_means: length must be divisible by 4");
    }
    const std::size_t quarter = series.size() / 4;
    std::array<double, 4> means{};
    for (int q = 0; q < 4; ++q) {
        double sum = 0.0;
        for (std::size_t i = 0; i < quarter; ++i) {
            sum += series[static_cast<std::size_t>(q) * quarter + i];
        }
        means[static_cast<std::size_t>(q)] = sum / static_cast<double>(quarter);
    }
    return means;
}

long minmax_pos_diff(std::span<const double> series) {
    require_nonempty(series, "minmax_pos_diff");
    std::size_t argmin = 0;
    std::size_t argmax = 0;
    for (std::size_t i = 1; i < series.size(); ++i) {
        if (series[i] < series[argmin]) argmin = i;
        if (series[i] > series[argmax]) argmax = i;
    }
    return static_cast<long>(argmax) - static_cast<long>(argmin);
}

std::vector<double> XAxisFeatureVector::flatten() const {
    std::vector<double> out;
    out.reserve(x_schema().size());
    out.insert(out.end(), raw.begin(), raw.end());
    out.push_back(min);
    out.push_back(max);
    out.insert(out.end(), quarter_means.begin(), quarter_means.end());
    out.push_back(amp_range);
    out.push_back(minmax_pos_diff);
    return out;
}

namespace {

void require_window(const signal::SensorWindow& window) {
    if (window.samples.size() != static_cast<std::size_t>(signal::kWindowSize)) {
        throw DataError("window must have exactly " + std::to_string(signal::kWindowSize) +
                        " samples, got " + std::to_string(window.samples.size()));
    }
}

}  // namespace

FeatureVector extract_features(const signal::SensorWindow& window,
                               const signal::FilterConfig& filters, EnergyVariant energy) {
    require_window(window);
    const signal::FilteredWindow fw = signal::filter_window(window, filters);

    // Per-sensor axis triples in filter_window order: acc 0..2, gyr 3..5, mag 6..8.
    const auto axis = [&](int sensor, int ax) -> std::span<const double> {
        return fw.axes[static_cast<std::size_t>(sensor * 3 + ax)];
    };

    std::vector<double> values;
    values.reserve(full_schema().size());

    for (int ax = 0; ax < 3; ++ax) {
        BasicStats stats[3];
        for (int sensor = 0; sensor < 3; ++sensor) stats[sensor] = basic_stats(axis(sensor, ax));
        for (int stat = 0; stat < 5; ++stat) {
            for (int sensor = 0; sensor < 3; ++sensor) {
                const BasicStats& s = stats[sensor];
                const double v = stat == 0   ? s.min
                                 : stat == 1 ? s.mean
                                 : stat == 2 ? s.max
                                 : stat == 3 ? s.variance
                                             : s.std_dev;
                values.push_back(v);
            }
        }
    }

    for (int sensor = 0; sensor < 3; ++sensor) {
        values.push_back(sma(axis(sensor, 0), axis(sensor, 1), axis(sensor, 2)));
    }

    constexpr int kPairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pair : kPairs) {
        for (int sensor = 0; sensor < 3; ++sensor) {
            values.push_back(pearson_corr(axis(sensor, pair[0]), axis(sensor, pair[1])));
        }
    }

    const std::span<const double> acc_x = axis(0, 0);
    const BasicStats acc_x_stats = basic_stats(acc_x);
    values.push_back(static_cast<double>(minmax_pos_diff(acc_x)));
    values.push_back(acc_x_stats.max - acc_x_stats.min);
    const std::array<double, 4> quarters = quarter_means(acc_x);
    values.insert(values.end(), quarters.begin(), quarters.end());

    for (int ax = 0; ax < 3; ++ax) {
        for (int sensor = 0; sensor < 2; ++sensor) values.push_back(aptd(axis(sensor, ax)));
    }
    for (int ax = 0; ax < 3; ++ax) {
        for (int sensor = 0; sensor < 2; ++sensor) values.push_back(mad(axis(sensor, ax)));
    }
    for (int ax = 0; ax < 3; ++ax) {
        for (int sensor = 0; sensor < 3; ++sensor) {
            values.push_back(spectral_energy(axis(sensor, ax), energy));
        }
    }
    for (int ax = 0; ax < 3; ++ax) {
        for (int sensor = 0; sensor < 3; ++sensor) {
            values.push_back(spectral_entropy(axis(sensor, ax)));
        }
    }
    for (int ax = 0; ax < 3; ++ax) {
        for (int sensor = 0; sensor < 3; ++sensor) {
            values.push_back(kurtosis(axis(sensor, ax)));
        }
    }

    const auto& schema = full_schema();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw DataError("feature '" + schema[i] + "' is not finite in window " +
                            std::to_string(window.window_id));
        }
    }

    FeatureVector fv;
    fv.values = std::move(values);
    fv.label = window.label;
    return fv;
}

XAxisFeatureVector extract_x_features(const signal::SensorWindow& window,
                                      const signal::FilterConfig& filters) {
    require_window(window);
    const signal::FilteredWindow fw = signal::filter_window(window, filters);
    const std::span<const double> acc_x = fw.acc(0);

    XAxisFeatureVector xv;
    std::copy(acc_x.begin(), acc_x.end(), xv.raw.begin());
    const BasicStats stats = basic_stats(acc_x);
    xv.min = stats.min;
    xv.max = stats.max;
    xv.quarter_means = quarter_means(acc_x);
    xv.amp_range = stats.max - stats.min;
    xv.minmax_pos_diff = static_cast<double>(minmax_pos_diff(acc_x));
    xv.label = window.label;

    const std::vector<double> flat = xv.flatten();
    const auto& schema = x_schema();
    for (std::size_t i = 0; i < flat.size(); ++i) {
        if (!std::isfinite(flat[i])) {
            throw DataError("feature '" + schema[i] + "' is not finite in window " +
                            std::to_string(window.window_id));
        }
    }
    return xv;
}

}  // namespace harkit::features
