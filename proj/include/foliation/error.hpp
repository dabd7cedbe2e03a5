#pragma once

#include <stdexcept>
#include <string>

namespace foliation {

/// Raised when an argument violates a documented precondition.
class InvalidInput : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a numerical routine fails to converge. This indicates a bug or
/// an exhausted iteration budget, never a malformed input.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace foliation
