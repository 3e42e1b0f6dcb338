#pragma once

// Test fixtures: deterministic random series, separable feature clusters,
// scripted motion windows with per-class signatures, and temp-file plumbing.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "harkit/dataset.hpp"
#include "harkit/signal.hpp"

namespace synth {

// Uniform doubles in [lo, hi] from a fixed seed.
std::vector<double> random_series(std::size_t n, std::uint64_t seed, double lo = -5.0,
                                  double hi = 5.0);

// A 64-sample window with independent random values on all 9 axes,
// timestamps 20 ms apart.
harkit::signal::SensorWindow random_window(std::uint64_t seed);

// Gaussian clusters with centers 'separation' apart on the leading axes;
// unit sigma. 4 classes use the flat activity taxonomy names.
harkit::dataset::FeatureDataset gaussian_clusters(std::size_t rows_per_class, int n_classes,
                                                  int n_features, double separation,
                                                  std::uint64_t seed);

// Labeled windows with distinct per-class motion signatures plus noise, for
// end-to-end pipeline tests. Classes cycle staying / jump_left / jump_right /
// fake_move.
std::vector<harkit::signal::SensorWindow> scripted_windows(std::size_t per_class,
                                                           std::uint64_t seed);

// A continuous sample stream whose acc-x shape alternates between calm and
// jump bursts; used for replay tests.
std::vector<harkit::signal::SensorSample> scripted_stream(std::size_t n_samples,
                                                          std::uint64_t seed);

// Canonical raw CSV from labeled windows (one window_id per window).
void write_raw_csv(const std::vector<harkit::signal::SensorWindow>& windows,
                   const std::string& path);

// Canonical raw CSV from a flat stream (window_id 0, label staying).
void write_stream_csv(const std::vector<harkit::signal::SensorSample>& samples,
                      const std::string& path);

// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::string path(const std::string& name) const;

private:
    std::filesystem::path root_;
};

std::string read_file(const std::string& path);

}  // namespace synth
