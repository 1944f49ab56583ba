#pragma once

#include <stdexcept>
#include <string>

namespace hassc {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid configuration value or inconsistent hyper-parameters (CLI exit 2).
struct ConfigError : Error {
    using Error::Error;
};

// Malformed input data: bad file bytes, unmapped labels, size mismatches (CLI exit 3).
struct DataError : Error {
    using Error::Error;
};

// Mismatched grid/tensor shapes between operands.
struct ShapeError : Error {
    using Error::Error;
};

// Coordinate outside the grid it addresses.
struct BoundsError : Error {
    using Error::Error;
};

// Operation invoked in the wrong order (e.g. backward before forward).
struct StateError : Error {
    using Error::Error;
};

}  // namespace hassc
