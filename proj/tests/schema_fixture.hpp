#pragma once

// The canonical 102-column layout, frozen independently of the code that
// generates it. The trailing class column makes 103 attributes; removing
// kExpectedDropped yields the 94-attribute layout.

#include <string>
#include <vector>

namespace fixture {

inline const std::vector<std::string> kExpectedSchema = {
    "acc-x-min", "gyr-x-min", "ori-angle-x-min",
    "acc-x-mean", "gyr-x-mean", "ori-angle-x-mean",
    "acc-x-max", "gyr-x-max", "ori-angle-x-max",
    "acc-x-var", "gyr-x-var", "ori-angle-x-var",
    "acc-x-std", "gyr-x-std", "ori-angle-x-std",
    "acc-y-min", "gyr-y-min", "ori-angle-y-min",
    "acc-y-mean", "gyr-y-mean", "ori-angle-y-mean",
    "acc-y-max", "gyr-y-max", "ori-angle-y-max",
    "acc-y-var", "gyr-y-var", "ori-angle-y-var",
    "acc-y-std", "gyr-y-std", "ori-angle-y-std",
    "acc-z-min", "gyr-z-min", "ori-angle-z-min",
    "acc-z-mean", "gyr-z-mean", "ori-angle-z-mean",
    "acc-z-max", "gyr-z-max", "ori-angle-z-max",
    "acc-z-var", "gyr-z-var", "ori-angle-z-var",
    "acc-z-std", "gyr-z-std", "ori-angle-z-std",
    "acc-sma", "gyr-sma", "mag-sma",
    "acc-pcorr-xy", "gyr-pcorr-xy", "mag-pcorr-xy",
    "acc-pcorr-xz", "gyr-pcorr-xz", "mag-pcorr-xz",
    "acc-pcorr-yz", "gyr-pcorr-yz", "mag-pcorr-yz",
    "acc-x-min-max-diff",
    "acc-x-amprange",
    "acc-x-mean-1quarter",
    "acc-x-mean-2quarter",
    "acc-x-mean-3quarter",
    "acc-x-mean-4quarter",
    "acc-x-aptd", "gyr-x-aptd",
    "acc-y-aptd", "gyr-y-aptd",
    "acc-z-aptd", "gyr-z-aptd",
    "acc-x-mad", "gyr-x-mad",
    "acc-y-mad", "gyr-y-mad",
    "acc-z-mad", "gyr-z-mad",
    "acc-x-energy", "gyr-x-energy", "mag-x-energy",
    "acc-y-energy", "gyr-y-energy", "mag-y-energy",
    "acc-z-energy", "gyr-z-energy", "mag-z-energy",
    "acc-x-entropy", "gyr-x-entropy", "mag-x-entropy",
    "acc-y-entropy", "gyr-y-entropy", "mag-y-entropy",
    "acc-z-entropy", "gyr-z-entropy", "mag-z-entropy",
    "acc-x-kurtosis", "gyr-x-kurtosis", "mag-x-kurtosis",
    "acc-y-kurtosis", "gyr-y-kurtosis", "mag-y-kurtosis",
    "acc-z-kurtosis", "gyr-z-kurtosis", "mag-z-kurtosis",
};

inline const std::vector<std::string> kExpectedDropped = {
    "acc-x-aptd", "acc-y-aptd", "acc-z-aptd", "gyr-x-aptd", "gyr-y-aptd",
    "gyr-z-aptd", "gyr-x-mad",  "gyr-y-mad",  "gyr-z-mad"};

}  // namespace fixture
