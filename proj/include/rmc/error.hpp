#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

namespace rmc {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// A coefficient (or bound) at a specific index violated positivity or ordering.
class CoefficientError : public InvalidArgument {
public:
    CoefficientError(std::size_t index, const std::string& what)
        : InvalidArgument("coefficient " + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

class DimensionMismatch : public InvalidArgument {
public:
    DimensionMismatch(std::size_t expected, std::size_t actual)
        : InvalidArgument("dimension mismatch: expected " + std::to_string(expected) + ", got " +
                          std::to_string(actual)) {}
};

/// Euler step larger than the admissible bound; carries the bound.
class InadmissibleStep : public InvalidArgument {
public:
    InadmissibleStep(double delta, double max_delta)
        : InvalidArgument("Euler step " + std::to_string(delta) + " exceeds admissible maximum " +
                          std::to_string(max_delta)),
          max_delta_(max_delta) {}

    double max_admissible() const noexcept { return max_delta_; }

private:
    double max_delta_;
};

/// The state became non-finite; carries the time reached.
class IntegrationError : public Error {
public:
    explicit IntegrationError(double time)
        : Error("non-finite state at t = " + std::to_string(time)), time_(time) {}

    double time_reached() const noexcept { return time_; }

private:
    double time_;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace rmc
