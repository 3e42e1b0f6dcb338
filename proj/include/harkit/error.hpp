#pragma once

#include <stdexcept>
#include <string>

namespace harkit {

// Invalid configuration: window sizes, kernel widths, model parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// Out-of-contract data: malformed CSV rows, schema mismatches, non-finite values.
struct DataError : std::runtime_error {
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Filesystem-level failures.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace harkit
