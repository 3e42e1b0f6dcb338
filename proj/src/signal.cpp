#include "harkit/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "harkit/error.hpp"

namespace harkit::signal {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

void check_finite(std::span<const double> series, const char* what) {
    for (double v : series) {
        if (!std::isfinite(v)) throw DataError(std::string(what) + ": non-finite input value");
    }
}

}  // namespace

std::optional<Smoothing> smoothing_from_string(std::string_view token) {
    if (token == "none") return Smoothing::none;
    if (token == "median") return Smoothing::median;
    if (token == "mean") return Smoothing::mean;
    if (token == "median_mean") return Smoothing::median_mean;
    return std::nullopt;
}

std::string_view to_string(Smoothing s) {
    switch (s) {
        case Smoothing::none: return "none";
        case Smoothing::median: return "median";
        case Smoothing::mean: return "mean";
        case Smoothing::median_mean: return "median_mean";
    }
    return "none";
}

std::vector<SensorWindow> make_windows(std::span<const SensorSample> stream, int size,
                                       double overlap_fraction) {
    if (!is_power_of_two(size)) {
        throw ConfigError("window size must be a power of two, got " + std::to_string(size));
    }
    if (overlap_fraction != 0.0 && overlap_fraction != 0.5) {
        throw ConfigError("overlap fraction must be 0 or 0.5");
    }
    const std::size_t step = static_cast<std::size_t>(size * (1.0 - overlap_fraction));
    const std::size_t window = static_cast<std::size_t>(size);

    std::vector<SensorWindow> windows;
    int id = 0;
    for (std::size_t start = 0; start + window <= stream.size(); start += step) {
        SensorWindow w;
        w.samples.assign(stream.begin() + start, stream.begin() + start + window);
        w.window_id = id++;
        windows.push_back(std::move(w));
    }
    return windows;
}

GravitySplit lowpass_gravity(std::span<const double> series, double alpha, double g0) {
    if (alpha < 0.0 || alpha > 1.0) throw ConfigError("gravity alpha must be in [0,1]");
    check_finite(series, "lowpass_gravity");

    GravitySplit out;
    out.gravity.reserve(series.size());
    out.linear.reserve(series.size());
    double g = g0;
    for (double v : series) {
        g = alpha * g + (1.0 - alpha) * v;
        out.gravity.push_back(g);
        out.linear.push_back(v - g);
    }
    return out;
}

GravitySplit lowpass_gravity(std::span<const double> series, double alpha) {
    const double g0 = series.empty() ? 0.0 : series.front();
    return lowpass_gravity(series, alpha, g0);
}

std::vector<double> highpass(std::span<const double> series, double alpha) {
    return lowpass_gravity(series, alpha).linear;
}

std::vector<double> smooth(std::span<const double> series, Smoothing kind, int kernel) {
    if (kind == Smoothing::none) return {series.begin(), series.end()};
    if (kind == Smoothing::median_mean) {
        const std::vector<double> med = smooth(series, Smoothing::median, kernel);
        return smooth(med, Smoothing::mean, kernel);
    }
    if (kernel < 1 || kernel % 2 == 0) {
        throw ConfigError("smoothing kernel must be odd and positive, got " +
                          std::to_string(kernel));
    }
    if (static_cast<std::size_t>(kernel) > series.size()) {
        throw ConfigError("smoothing kernel exceeds series length");
    }

    const long n = static_cast<long>(series.size());
    const long half = kernel / 2;
    std::vector<double> out(series.size());
    std::vector<double> window(static_cast<std::size_t>(kernel));
    for (long i = 0; i < n; ++i) {
        for (long k = -half; k <= half; ++k) {
            const long idx = std::clamp(i + k, 0L, n - 1);  // replicate-edge padding
            window[static_cast<std::size_t>(k + half)] = series[static_cast<std::size_t>(idx)];
        }
        if (kind == Smoothing::median) {
            std::nth_element(window.begin(), window.begin() + half, window.end());
            out[static_cast<std::size_t>(i)] = window[static_cast<std::size_t>(half)];
        } else {
            double sum = 0.0;
            for (double v : window) sum += v;
            out[static_cast<std::size_t>(i)] = sum / kernel;
        }
    }
    return out;
}

double magnitude(double x, double y, double z) { return std::sqrt(x * x + y * y + z * z); }

std::vector<double> fft_magnitudes(std::span<const double> series) {
    const std::size_t n = series.size();
    if (n == 0 || (n & (n - 1)) != 0) {
        throw ConfigError("FFT length must be a power of two, got " + std::to_string(n));
    }

    std::vector<double> re(series.begin(), series.end());
    std::vector<double> im(n, 0.0);

    // Bit-reversal permutation, then in-place butterflies.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) {
            std::swap(re[i], re[j]);
            std::swap(im[i], im[j]);
        }
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len >> 1;
        for (std::size_t k = 0; k < half; ++k) {
            const double ang = -2.0 * std::numbers::pi * static_cast<double>(k) /
                               static_cast<double>(len);
            const double wr = std::cos(ang);
            const double wi = std::sin(ang);
            for (std::size_t i = k; i < n; i += len) {
                const std::size_t m = i + half;
                const double tr = re[m] * wr - im[m] * wi;
                const double ti = re[m] * wi + im[m] * wr;
                re[m] = re[i] - tr;
                im[m] = im[i] - ti;
                re[i] += tr;
                im[i] += ti;
            }
        }
    }

    std::vector<double> mags(n);
    for (std::size_t k = 0; k < n; ++k) mags[k] = std::hypot(re[k], im[k]);
    return mags;
}

FilteredWindow filter_window(const SensorWindow& window, const FilterConfig& config) {
    const std::size_t n = window.samples.size();
    FilteredWindow out;

    std::array<std::vector<double>, 9> raw;
    for (auto& axis : raw) axis.reserve(n);
    for (const SensorSample& s : window.samples) {
        raw[0].push_back(s.acc.x);
        raw[1].push_back(s.acc.y);
        raw[2].push_back(s.acc.z);
        raw[3].push_back(s.gyr.x);
        raw[4].push_back(s.gyr.y);
        raw[5].push_back(s.gyr.z);
        raw[6].push_back(s.mag.x);
        raw[7].push_back(s.mag.y);
        raw[8].push_back(s.mag.z);
    }

    for (int a = 0; a < 9; ++a) {
        std::vector<double> filtered = a < 3
            ? lowpass_gravity(raw[a], config.gravity_alpha).linear
            : highpass(raw[a], config.gravity_alpha);
        if (config.smoothing != Smoothing::none) {
            filtered = smooth(filtered, config.smoothing, config.kernel_size);
        }
        out.axes[a] = std::move(filtered);
    }
    return out;
}

}  // namespace harkit::signal
