#pragma once

// Windowing, filtering and spectral primitives that turn raw 9-axis sample
// streams into clean fixed-size windows. All functions are pure and safe to
// call concurrently.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "harkit/activity.hpp"

namespace harkit::signal {

inline constexpr int kWindowSize = 64;     // power of two, required by the FFT
inline constexpr double kSampleRateHz = 50.0;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
};

struct SensorSample {
    std::int64_t timestamp_ms = 0;
    Vec3 acc;  // m/s^2
    Vec3 gyr;  // rad/s
    Vec3 mag;  // microtesla
};

struct SensorWindow {
    std::vector<SensorSample> samples;  // kWindowSize entries in the standard pipeline
    std::optional<ActivityClass> label;
    int window_id = 0;
};

enum class Smoothing { none, median, mean, median_mean };

struct FilterConfig {
    double gravity_alpha = 0.8;          // low-pass smoothing factor, in [0,1]
    Smoothing smoothing = Smoothing::none;
    int kernel_size = 11;                // odd; used when smoothing != none
};

std::optional<Smoothing> smoothing_from_string(std::string_view token);
std::string_view to_string(Smoothing s);

// Slices a stream into fixed-size windows. overlap_fraction must be 0 or 0.5;
// a trailing partial window is discarded. Window ids count from 0.
std::vector<SensorWindow> make_windows(std::span<const SensorSample> stream,
                                       int size = kWindowSize,
                                       double overlap_fraction = 0.5);

struct GravitySplit {
    std::vector<double> gravity;
    std::vector<double> linear;
};

// First-order IIR low pass g_t = alpha*g_{t-1} + (1-alpha)*a_t seeded with g0,
// and its complement linear_t = a_t - g_t.
GravitySplit lowpass_gravity(std::span<const double> series, double alpha, double g0);

// g0 defaults to the first sample, which avoids the startup transient.
GravitySplit lowpass_gravity(std::span<const double> series, double alpha);

// out_t = in_t - lowpass(in)_t with the default g0.
std::vector<double> highpass(std::span<const double> series, double alpha);

// Centered median/mean filter with replicate-edge padding. Output length
// equals input length. kernel must be odd, >= 1 and <= series length.
std::vector<double> smooth(std::span<const double> series, Smoothing kind, int kernel);

double magnitude(double x, double y, double z);

// |X_k| for all k of the DFT of a power-of-two-length series. In-order
// radix-2, no windowing function.
std::vector<double> fft_magnitudes(std::span<const double> series);

// Per-axis series of one window after the configured filters, in the fixed
// order acc x/y/z, gyr x/y/z, mag x/y/z. Gravity removal (the low-pass split)
// applies to the accelerometer; gyroscope and magnetometer get the
// complementary high pass with the same alpha, then optional smoothing runs
// on every axis.
struct FilteredWindow {
    std::array<std::vector<double>, 9> axes;

    std::span<const double> acc(int axis) const { return axes[axis]; }
    std::span<const double> gyr(int axis) const { return axes[3 + axis]; }
    std::span<const double> mag(int axis) const { return axes[6 + axis]; }
};

FilteredWindow filter_window(const SensorWindow& window, const FilterConfig& config);

}  // namespace harkit::signal
