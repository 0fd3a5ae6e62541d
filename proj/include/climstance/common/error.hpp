#pragma once

#include <stdexcept>
#include <string>

namespace climstance {

// Base for all library errors. CLI exit codes map onto the subclasses:
// ConfigError -> 1, DataError -> 2, NumericError -> 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration or usage (bad flags, impossible settings).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed or inconsistent input data (corpus, lexicons, topic files).
struct DataError : Error {
    using Error::Error;
};

// Numeric contract violations: NaN/Inf values, diverging training.
struct NumericError : Error {
    using Error::Error;
};

// Incompatible array shapes in tensor operations.
struct ShapeError : Error {
    using Error::Error;
};

}  // namespace climstance
