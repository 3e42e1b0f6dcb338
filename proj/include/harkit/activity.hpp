#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace harkit {

// Flat activity taxonomy. The enum order is canonical: it fixes class indices,
// argmax tie-breaking and CSV serialization everywhere.
enum class ActivityClass : int {
    staying = 0,
    jump_left = 1,
    jump_right = 2,
    fake_move = 3,
};

inline constexpr int kActivityClassCount = 4;

inline constexpr std::array<std::string_view, 4> kActivityClassNames = {
    "staying", "jump_left", "jump_right", "fake_move"};

// Two-stage taxonomy: jump_left/jump_right collapse into lateral_move for the
// main model; the side model distinguishes left from right.
inline constexpr std::array<std::string_view, 3> kSuperClassNames = {
    "lateral_move", "staying", "fake_move"};
inline constexpr std::array<std::string_view, 2> kSideClassNames = {"left", "right"};

inline std::string_view to_string(ActivityClass c) {
    return kActivityClassNames[static_cast<int>(c)];
}

inline std::optional<ActivityClass> activity_from_string(std::string_view token) {
    for (int i = 0; i < kActivityClassCount; ++i) {
        if (kActivityClassNames[i] == token) return static_cast<ActivityClass>(i);
    }
    return std::nullopt;
}

inline std::string_view super_class_of(ActivityClass c) {
    switch (c) {
        case ActivityClass::jump_left:
        case ActivityClass::jump_right: return kSuperClassNames[0];
        case ActivityClass::staying: return kSuperClassNames[1];
        case ActivityClass::fake_move: return kSuperClassNames[2];
    }
    return kSuperClassNames[1];
}

inline std::optional<std::string_view> side_of(ActivityClass c) {
    if (c == ActivityClass::jump_left) return kSideClassNames[0];
    if (c == ActivityClass::jump_right) return kSideClassNames[1];
    return std::nullopt;
}

}  // namespace harkit
