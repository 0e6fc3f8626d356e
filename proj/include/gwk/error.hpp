#pragma once

#include <stdexcept>
#include <string>

namespace gwk {

// Error hierarchy. The C API maps each class onto a distinct status code.

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad parameters, mismatched dimensions, malformed input.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Experiment or model configuration that cannot be honoured.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Cholesky breakdown, series or iteration nonconvergence.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// A theorem's hypotheses do not hold (mismatched smoothness, shape or dimension),
/// so it says nothing about equivalence.
class Inapplicable : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Thrown by cholesky() with the failing pivot.
class NotPositiveDefinite : public NumericalError {
public:
    NotPositiveDefinite(std::size_t pivot, double value)
        : NumericalError("matrix not positive definite at pivot " + std::to_string(pivot) +
                         " (value " + std::to_string(value) + ")"),
          pivot_(pivot) {}
    std::size_t pivot() const noexcept { return pivot_; }

private:
    std::size_t pivot_;
};

}  // namespace gwk
