#include "synth.hpp"

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace synth {

using harkit::ActivityClass;
using harkit::signal::SensorSample;
using harkit::signal::SensorWindow;

std::vector<double> random_series(std::size_t n, std::uint64_t seed, double lo, double hi) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> out(n);
    for (double& v : out) v = dist(rng);
    return out;
}

SensorWindow random_window(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-5.0, 5.0);
    SensorWindow w;
    w.samples.resize(harkit::signal::kWindowSize);
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        SensorSample& s = w.samples[i];
        s.timestamp_ms = static_cast<std::int64_t>(i) * 20;
        s.acc = {dist(rng), dist(rng), dist(rng)};
        s.gyr = {dist(rng), dist(rng), dist(rng)};
        s.mag = {dist(rng), dist(rng), dist(rng)};
    }
    return w;
}

harkit::dataset::FeatureDataset gaussian_clusters(std::size_t rows_per_class, int n_classes,
                                                  int n_features, double separation,
                                                  std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);

    harkit::dataset::FeatureDataset ds;
    for (int f = 0; f < n_features; ++f) ds.schema.push_back("f" + std::to_string(f));
    if (n_classes == 4) {
        for (auto name : harkit::kActivityClassNames) ds.class_names.emplace_back(name);
    } else {
        for (int c = 0; c < n_classes; ++c) ds.class_names.push_back("c" + std::to_string(c));
    }

    for (int c = 0; c < n_classes; ++c) {
        for (std::size_t r = 0; r < rows_per_class; ++r) {
            harkit::dataset::Row row;
            row.label = c;
            row.values.resize(static_cast<std::size_t>(n_features));
            for (int f = 0; f < n_features; ++f) {
                const double center = ((c >> f) & 1) ? separation : 0.0;
                row.values[static_cast<std::size_t>(f)] = center + noise(rng);
            }
            ds.rows.push_back(std::move(row));
        }
    }
    return ds;
}

namespace {

// Gaussian bump centered at sample c with width w.
double bump(int i, double c, double w) {
    const double d = (static_cast<double>(i) - c) / w;
    return std::exp(-0.5 * d * d);
}

SensorWindow motion_window(ActivityClass cls, int window_id, std::mt19937_64& rng) {
    std::normal_distribution<double> noise(0.0, 0.15);
    SensorWindow w;
    w.label = cls;
    w.window_id = window_id;
    w.samples.resize(harkit::signal::kWindowSize);
    for (int i = 0; i < harkit::signal::kWindowSize; ++i) {
        SensorSample& s = w.samples[i];
        s.timestamp_ms = static_cast<std::int64_t>(window_id) * 1280 +
                         static_cast<std::int64_t>(i) * 20;
        double ax = noise(rng), ay = noise(rng), az = 9.81 + noise(rng);
        double gx = noise(rng), gy = noise(rng), gz = noise(rng);
        double mx = 22.0 + noise(rng), my = 5.0 + noise(rng), mz = 40.0 + noise(rng);
        switch (cls) {
            case ActivityClass::staying: break;
            case ActivityClass::jump_left:
                // trough then peak on acc-x, body rotation on gyr-z
                ax += -6.0 * bump(i, 22, 4.0) + 6.0 * bump(i, 40, 4.0);
                ay += 2.0 * bump(i, 30, 6.0);
                gz += 1.5 * bump(i, 30, 8.0);
                mx += 3.0 * bump(i, 32, 10.0);
                break;
            case ActivityClass::jump_right:
                ax += 6.0 * bump(i, 22, 4.0) - 6.0 * bump(i, 40, 4.0);
                ay += 2.0 * bump(i, 30, 6.0);
                gz += -1.5 * bump(i, 30, 8.0);
                mx += -3.0 * bump(i, 32, 10.0);
                break;
            case ActivityClass::fake_move:
                // arm wave: strong gyroscope swing, weak body acceleration
                gx += 2.5 * std::sin(0.5 * i) * bump(i, 32, 14.0);
                gy += 2.0 * std::cos(0.4 * i) * bump(i, 32, 14.0);
                ax += 0.8 * bump(i, 32, 10.0);
                break;
        }
        s.acc = {ax, ay, az};
        s.gyr = {gx, gy, gz};
        s.mag = {mx, my, mz};
    }
    return w;
}

}  // namespace

std::vector<SensorWindow> scripted_windows(std::size_t per_class, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<SensorWindow> windows;
    windows.reserve(per_class * 4);
    int id = 0;
    for (std::size_t r = 0; r < per_class; ++r) {
        for (int c = 0; c < harkit::kActivityClassCount; ++c) {
            windows.push_back(motion_window(static_cast<ActivityClass>(c), id++, rng));
        }
    }
    return windows;
}

std::vector<SensorSample> scripted_stream(std::size_t n_samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 0.15);
    std::vector<SensorSample> samples(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) {
        SensorSample& s = samples[i];
        s.timestamp_ms = static_cast<std::int64_t>(i) * 20;
        // one left-jump burst every 256 samples, aligned so the window
        // starting at phase 96 sees the full motion_window signature
        const int phase = static_cast<int>(i % 256);
        double ax = noise(rng), ay = noise(rng);
        double gz = noise(rng);
        double mx = 22.0 + noise(rng);
        if (phase >= 96 && phase < 160) {
            const int offset = phase - 96;
            ax += -6.0 * bump(offset, 22, 4.0) + 6.0 * bump(offset, 40, 4.0);
            ay += 2.0 * bump(offset, 30, 6.0);
            gz += 1.5 * bump(offset, 30, 8.0);
            mx += 3.0 * bump(offset, 32, 10.0);
        }
        s.acc = {ax, ay, 9.81 + noise(rng)};
        s.gyr = {noise(rng), noise(rng), gz};
        s.mag = {mx, 5.0 + noise(rng), 40.0 + noise(rng)};
    }
    return samples;
}

namespace {

void write_raw_rows(std::ostream& out, const std::vector<SensorSample>& samples,
                    const std::string& label, int window_id) {
    for (const SensorSample& s : samples) {
        out << s.timestamp_ms << ',' << s.acc.x << ',' << s.acc.y << ',' << s.acc.z << ','
            << s.gyr.x << ',' << s.gyr.y << ',' << s.gyr.z << ',' << s.mag.x << ',' << s.mag.y
            << ',' << s.mag.z << ',' << label << ',' << window_id << '\n';
    }
}

}  // namespace

void write_raw_csv(const std::vector<SensorWindow>& windows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    out.precision(17);
    out << harkit::dataset::kRawHeader << '\n';
    for (const SensorWindow& w : windows) {
        write_raw_rows(out, w.samples, std::string(to_string(*w.label)), w.window_id);
    }
}

void write_stream_csv(const std::vector<SensorSample>& samples, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    out.precision(17);
    out << harkit::dataset::kRawHeader << '\n';
    write_raw_rows(out, samples, "staying", 0);
}

TempDir::TempDir(const std::string& tag) {
    root_ = std::filesystem::temp_directory_path() /
            ("harkit-" + tag + "-" + std::to_string(::getpid()));
    std::filesystem::create_directories(root_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(root_, ec);
}

std::string TempDir::path(const std::string& name) const { return (root_ / name).string(); }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace synth
