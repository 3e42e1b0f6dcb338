#pragma once

// Replay-driven real-time predictor: assembles overlapping windows from a
// sample feed, classifies each one, debounces jump predictions and emits
// activity events.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "harkit/models.hpp"
#include "harkit/signal.hpp"

namespace harkit::stream {

struct ActivityEvent {
    std::int64_t at_ms = 0;      // timestamp of the window's last sample
    std::string label;           // predicted class name
    double confidence = 0.0;     // probability of the predicted class
    bool suppressed = false;     // inside the quiet window after a jump
};

struct DebounceState {
    std::optional<std::int64_t> last_jump_at_ms;
    std::int64_t quiet_window_ms = 1000;
};

// Pull-based sample source; returns nullopt at end of stream.
using SampleFeed = std::function<std::optional<signal::SensorSample>()>;

// Replays a raw CSV in file order. In realtime mode samples are paced against
// an absolute schedule of 1/rate_hz per sample; batch mode emits immediately.
class Replay {
public:
    explicit Replay(const std::string& path, double rate_hz = signal::kSampleRateHz,
                    bool realtime = false);

    std::optional<signal::SensorSample> next();
    SampleFeed feed();

private:
    std::vector<signal::SensorSample> samples_;
    std::size_t pos_ = 0;
    double rate_hz_;
    bool realtime_;
    std::int64_t start_ns_ = 0;
};

struct StreamError {
    std::size_t window_index = 0;
    std::string message;
};

struct StreamResult {
    std::vector<ActivityEvent> events;
    std::vector<StreamError> errors;  // per-window failures; the stream continues
};

// First prediction once 64 samples arrived, then one every 32. After an
// unsuppressed jump_left/jump_right event every prediction whose timestamp is
// within quiet_window_ms is flagged suppressed; suppressed events never arm
// or extend the quiet window. The clock is sample timestamps, so batch and
// realtime replay agree.
StreamResult streaming_predict(const SampleFeed& feed, const models::TrainedModel& model,
                               const signal::FilterConfig& filters, DebounceState debounce);

// Append-only CSV `at_ms,label,confidence,suppressed`, flushed per event.
void event_log(const std::vector<ActivityEvent>& events, const std::string& path);

}  // namespace harkit::stream
