#pragma once

#include <stdexcept>
#include <string>

namespace multinet {

/// Base class for everything thrown by this library.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad input: malformed files, invalid configs, violated preconditions.
/// The CLI maps these to exit code 1.
class validation_error : public error {
public:
    using error::error;
};

/// Numeric or algorithmic failure on otherwise valid input: non-convergence,
/// undefined statistics, degenerate data. The CLI maps these to exit code 2.
class computation_error : public error {
public:
    using error::error;
};

} // namespace multinet
