// errors.hpp — exception taxonomy shared by all qwalk layers.

#pragma once

#include <stdexcept>

namespace qwalk {

// Invalid parameters, malformed config text, out-of-range values. CLI exit code 1.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Array-length mismatch between a state and a disorder field.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// A shift would move amplitude off the end of the chain. Never silently wraps.
struct BoundaryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Power-law fit preconditions violated (nonpositive data, too few points).
struct FitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// File I/O failure, reported with path context. CLI exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace qwalk
