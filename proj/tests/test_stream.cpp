#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>

#include "harkit/error.hpp"
#include "harkit/stream.hpp"
#include "synth.hpp"

using namespace harkit;
using namespace harkit::stream;

namespace {

// Scripted stand-in for a trained classifier: returns a fixed label sequence
// regardless of input, so debounce behavior can be pinned exactly.
class ScriptedModel final : public models::TrainedModel {
public:
    explicit ScriptedModel(std::vector<std::string> script)
        : TrainedModel(models::ModelKind::tree, models::ModelConfig{}, features::full_schema(),
                       {"staying", "jump_left", "jump_right", "fake_move"}),
          script_(std::move(script)) {}

protected:
    models::Prediction predict_checked(std::span<const double>) const override {
        const std::string& label = script_[std::min(call_, script_.size() - 1)];
        ++call_;
        models::Prediction p;
        p.probabilities.assign(4, 0.0);
        for (std::size_t c = 0; c < classes().size(); ++c) {
            if (classes()[c] == label) {
                p.label = static_cast<int>(c);
                p.probabilities[c] = 1.0;
            }
        }
        return p;
    }

private:
    std::vector<std::string> script_;
    mutable std::size_t call_ = 0;
};

// Throws on a chosen window to exercise per-window error recovery.
class FaultyModel final : public models::TrainedModel {
public:
    explicit FaultyModel(std::size_t fail_at)
        : TrainedModel(models::ModelKind::tree, models::ModelConfig{}, features::full_schema(),
                       {"staying", "jump_left", "jump_right", "fake_move"}),
          fail_at_(fail_at) {}

protected:
    models::Prediction predict_checked(std::span<const double>) const override {
        if (call_++ == fail_at_) throw DataError("scripted failure");
        models::Prediction p;
        p.label = 0;
        p.probabilities = {1.0, 0.0, 0.0, 0.0};
        return p;
    }

private:
    std::size_t fail_at_;
    mutable std::size_t call_ = 0;
};

SampleFeed feed_of(const std::vector<signal::SensorSample>& samples) {
    auto pos = std::make_shared<std::size_t>(0);
    return [&samples, pos]() -> std::optional<signal::SensorSample> {
        if (*pos >= samples.size()) return std::nullopt;
        return samples[(*pos)++];
    };
}

}  // namespace

TEST_SUITE("stream") {

TEST_CASE("replay emits the file in order") {
    synth::TempDir dir("replay");
    const auto samples = synth::scripted_stream(128, 3);
    synth::write_stream_csv(samples, dir.path("s.csv"));

    Replay replay(dir.path("s.csv"));
    std::size_t count = 0;
    while (auto s = replay.next()) {
        CHECK(s->timestamp_ms == samples[count].timestamp_ms);
        ++count;
    }
    CHECK(count == 128);
}

TEST_CASE("replay of an empty file terminates cleanly") {
    synth::TempDir dir("replay-empty");
    synth::write_stream_csv({}, dir.path("empty.csv"));
    Replay replay(dir.path("empty.csv"));
    CHECK(!replay.next().has_value());
}

TEST_CASE("realtime replay paces against the sample rate") {
    synth::TempDir dir("replay-rt");
    const auto samples = synth::scripted_stream(64, 5);
    synth::write_stream_csv(samples, dir.path("s.csv"));

    Replay replay(dir.path("s.csv"), 50.0, /*realtime=*/true);
    const auto start = std::chrono::steady_clock::now();
    std::size_t count = 0;
    while (replay.next()) ++count;
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(count == 64);
    // 64 samples at 50 Hz span about 1.28 s; allow -5% and scheduler slack above
    CHECK(seconds > 1.28 * 0.95);
    CHECK(seconds < 1.28 * 1.25);
}

TEST_CASE("streaming cadence: first event at 64 samples, then every 32") {
    const auto samples = synth::scripted_stream(128, 7);
    const ScriptedModel model(std::vector<std::string>(8, "staying"));
    const StreamResult result =
        streaming_predict(feed_of(samples), model, signal::FilterConfig{}, DebounceState{});

    REQUIRE(result.events.size() == 3);
    CHECK(result.errors.empty());
    // events at sample indices 64 + 32*i; at_ms is the last sample's stamp
    CHECK(result.events[0].at_ms == samples[63].timestamp_ms);
    CHECK(result.events[1].at_ms == samples[95].timestamp_ms);
    CHECK(result.events[2].at_ms == samples[127].timestamp_ms);
    for (const auto& e : result.events) {
        CHECK(e.label == "staying");
        CHECK(e.confidence == 1.0);
        CHECK(!e.suppressed);
    }
}

TEST_CASE("debounce suppresses follow-up predictions inside the quiet window") {
    // 7 windows -> events every 640 ms starting at t=1260
    const auto samples = synth::scripted_stream(64 + 32 * 6, 9);
    const ScriptedModel model({"jump_left", "jump_right", "staying", "jump_right", "staying",
                               "staying", "jump_left"});
    const StreamResult result =
        streaming_predict(feed_of(samples), model, signal::FilterConfig{}, DebounceState{});

    REQUIRE(result.events.size() == 7);
    // t=1260: first jump, unsuppressed; arms the 1 s window
    CHECK(!result.events[0].suppressed);
    CHECK(result.events[0].label == "jump_left");
    // t=1900: 640 ms later -> suppressed, and it must not extend the window
    CHECK(result.events[1].suppressed);
    CHECK(result.events[1].label == "jump_right");  // suppressed events keep their label
    // t=2540: 1280 ms after the armed jump -> unsuppressed again
    CHECK(!result.events[2].suppressed);
    // t=3180: unsuppressed jump_right re-arms
    CHECK(!result.events[3].suppressed);
    // t=3820: 640 ms after re-arm -> suppressed
    CHECK(result.events[4].suppressed);
    // t=4460: 1280 ms after re-arm -> clear
    CHECK(!result.events[5].suppressed);
    CHECK(!result.events[6].suppressed);
}

TEST_CASE("a prediction exactly at the quiet boundary is not suppressed") {
    const auto samples = synth::scripted_stream(64 + 32, 11);
    const ScriptedModel model({"jump_left", "jump_right"});
    DebounceState debounce;
    debounce.quiet_window_ms = 640;  // the inter-event gap exactly
    const StreamResult result =
        streaming_predict(feed_of(samples), model, signal::FilterConfig{}, debounce);
    REQUIRE(result.events.size() == 2);
    CHECK(!result.events[0].suppressed);
    CHECK(!result.events[1].suppressed);  // 640 >= 640
}

TEST_CASE("staying never arms the debounce") {
    const auto samples = synth::scripted_stream(64 + 32 * 5, 13);
    const ScriptedModel model(std::vector<std::string>(6, "staying"));
    const StreamResult result =
        streaming_predict(feed_of(samples), model, signal::FilterConfig{}, DebounceState{});
    for (const auto& e : result.events) CHECK(!e.suppressed);
}

TEST_CASE("per-window failures do not stop the stream") {
    const auto samples = synth::scripted_stream(128, 15);
    const FaultyModel model(1);
    const StreamResult result =
        streaming_predict(feed_of(samples), model, signal::FilterConfig{}, DebounceState{});
    CHECK(result.events.size() == 2);
    REQUIRE(result.errors.size() == 1);
    CHECK(result.errors[0].window_index == 1);
    CHECK(result.errors[0].message == std::string("scripted failure"));
}

TEST_CASE("batch streaming matches offline extraction and prediction") {
    const auto windows = synth::scripted_windows(10, 17);
    dataset::RawDataset raw;
    raw.windows = windows;
    const signal::FilterConfig filters;
    const auto ds = dataset::extract_dataset(raw, filters);
    models::ModelConfig config;
    config.kind = models::ModelKind::rf;
    config.trees = 15;
    config.seed = 8;
    const auto model = models::train(config, ds);

    const auto samples = synth::scripted_stream(64 + 32 * 9, 19);
    const StreamResult streamed =
        streaming_predict(feed_of(samples), *model, filters, DebounceState{});

    // offline: same window starts, same filters, same model
    std::size_t index = 0;
    for (std::size_t start = 0; start + 64 <= samples.size(); start += 32) {
        signal::SensorWindow window;
        window.samples.assign(samples.begin() + static_cast<long>(start),
                              samples.begin() + static_cast<long>(start + 64));
        const auto fv = features::extract_features(window, filters);
        const auto pred = model->predict(fv.values);
        REQUIRE(index < streamed.events.size());
        CHECK(streamed.events[index].label ==
              model->classes()[static_cast<std::size_t>(pred.label)]);
        ++index;
    }
    CHECK(index == streamed.events.size());
}

TEST_CASE("event log format and determinism") {
    synth::TempDir dir("event-log");
    std::vector<ActivityEvent> events = {
        {1260, "jump_left", 0.97, false},
        {1900, "jump_right", 0.66, true},
        {2540, "staying", 1.0, false},
    };
    event_log(events, dir.path("e1.csv"));
    event_log(events, dir.path("e2.csv"));

    const std::string log = synth::read_file(dir.path("e1.csv"));
    CHECK(log ==
          "at_ms,label,confidence,suppressed\n"
          "1260,jump_left,0.97,false\n"
          "1900,jump_right,0.66,true\n"
          "2540,staying,1,false\n");
    CHECK(log == synth::read_file(dir.path("e2.csv")));
}

}  // TEST_SUITE
