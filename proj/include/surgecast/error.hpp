#pragma once

#include <stdexcept>
#include <string>

namespace surgecast {

// Exit-code categories used by the CLI: usage errors map to 1, data errors
// to 2, numeric errors to 3.

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : UsageError {
    using UsageError::UsageError;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : DataError {
    using DataError::DataError;
};

struct SchemaError : DataError {
    using DataError::DataError;
};

struct ConflictError : DataError {
    using DataError::DataError;
};

struct RangeError : DataError {
    using DataError::DataError;
};

struct ShapeError : DataError {
    using DataError::DataError;
};

struct FormatError : DataError {
    using DataError::DataError;
};

struct CorruptionError : DataError {
    using DataError::DataError;
};

struct MetricError : DataError {
    using DataError::DataError;
};

struct IoError : DataError {
    using DataError::DataError;
};

struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DivergenceError : NumericError {
    using NumericError::NumericError;
};

} // namespace surgecast
