#include "harkit/stream.hpp"

#include <chrono>
#include <deque>
#include <fstream>
#include <thread>

#include "harkit/csv.hpp"
#include "harkit/dataset.hpp"
#include "harkit/error.hpp"
#include "harkit/features.hpp"

namespace harkit::stream {

Replay::Replay(const std::string& path, double rate_hz, bool realtime)
    : samples_(dataset::load_raw_stream(path)), rate_hz_(rate_hz), realtime_(realtime) {
    if (rate_hz_ <= 0.0) throw ConfigError("replay rate must be positive");
}

std::optional<signal::SensorSample> Replay::next() {
    if (pos_ >= samples_.size()) return std::nullopt;
    if (realtime_) {
        using clock = std::chrono::steady_clock;
        if (pos_ == 0) {
            start_ns_ = clock::now().time_since_epoch().count();
        } else {
            // Absolute schedule: sample i is due at start + i/rate. Pacing
            // against the schedule rather than the previous sample keeps the
            // stream drift-free.
            const auto due = clock::time_point(std::chrono::nanoseconds(
                start_ns_ +
                static_cast<std::int64_t>(1e9 * static_cast<double>(pos_) / rate_hz_)));
            std::this_thread::sleep_until(due);
        }
    }
    return samples_[pos_++];
}

SampleFeed Replay::feed() {
    return [this] { return next(); };
}

StreamResult streaming_predict(const SampleFeed& feed, const models::TrainedModel& model,
                               const signal::FilterConfig& filters, DebounceState debounce) {
    if (debounce.quiet_window_ms <= 0) throw ConfigError("quiet window must be positive");

    constexpr int kSize = signal::kWindowSize;
    constexpr int kStep = kSize / 2;  // 50% overlap

    StreamResult result;
    std::deque<signal::SensorSample> buffer;
    std::size_t window_index = 0;
    int since_last = 0;

    while (auto sample = feed()) {
        buffer.push_back(*sample);
        if (buffer.size() > static_cast<std::size_t>(kSize)) buffer.pop_front();
        if (buffer.size() < static_cast<std::size_t>(kSize)) continue;
        ++since_last;
        const bool first = window_index == 0;
        if (!first && since_last < kStep) continue;
        since_last = 0;

        signal::SensorWindow window;
        window.samples.assign(buffer.begin(), buffer.end());
        window.window_id = static_cast<int>(window_index);

        try {
            std::vector<double> input = features::extract_features(window, filters).values;
            if (model.needs_x_features()) {
                const std::vector<double> x =
                    features::extract_x_features(window, filters).flatten();
                input.insert(input.end(), x.begin(), x.end());
            }
            const models::Prediction pred = model.predict(input);

            ActivityEvent event;
            event.at_ms = window.samples.back().timestamp_ms;
            event.label = model.classes()[static_cast<std::size_t>(pred.label)];
            event.confidence = pred.probabilities[static_cast<std::size_t>(pred.label)];
            event.suppressed = debounce.last_jump_at_ms &&
                               event.at_ms - *debounce.last_jump_at_ms <
                                   debounce.quiet_window_ms;

            const bool is_jump = event.label == to_string(ActivityClass::jump_left) ||
                                 event.label == to_string(ActivityClass::jump_right);
            if (is_jump && !event.suppressed) {
                debounce.last_jump_at_ms = event.at_ms;  // only unsuppressed jumps arm it
            }
            result.events.push_back(std::move(event));
        } catch (const std::exception& e) {
            result.errors.push_back(StreamError{window_index, e.what()});
        }
        ++window_index;
    }
    return result;
}

void event_log(const std::vector<ActivityEvent>& events, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "at_ms,label,confidence,suppressed\n";
    out.flush();
    for (const ActivityEvent& event : events) {
        out << event.at_ms << ',' << event.label << ',' << csv::format_value(event.confidence)
            << ',' << (event.suppressed ? "true" : "false") << '\n';
        out.flush();
        if (!out) throw IoError("failed writing " + path);
    }
}

}  // namespace harkit::stream
