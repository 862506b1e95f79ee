#pragma once

#include <stdexcept>
#include <string>

namespace rdcscreen {

/// Invalid argument or configuration value supplied by the caller.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operands whose shapes do not agree (sample counts, dimensions).
class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

/// Input data that cannot be used: non-finite cells, malformed files,
/// or a response with no variation at all.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public DataError {
public:
    using DataError::DataError;
};

} // namespace rdcscreen
