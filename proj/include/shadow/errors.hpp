#ifndef SHADOW_ERRORS_HPP
#define SHADOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace shadow {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched or unsupported dimensions (odd ambient dimension, size-zero input, ...).
struct DimensionError : Error {
    using Error::Error;
};

// A parameter is outside its admissible range (epsilon window, nonpositive step, ...).
struct ParameterError : Error {
    using Error::Error;
};

// An enumeration or net would exceed the configured point budget.
struct BudgetError : Error {
    using Error::Error;
};

// A rejection sampler failed to produce a valid point within its attempt cap.
struct SamplerStallError : Error {
    using Error::Error;
};

// A quantity violated one of the library's guaranteed bracket invariants
// (orthogonality drift, sandwich ordering, area caps).  Indicates a bug or
// corrupted input, never a statistical fluctuation.
struct InvariantError : Error {
    using Error::Error;
};

// File I/O or config parsing failure.
struct IoError : Error {
    using Error::Error;
};

}  // namespace shadow

#endif
