#pragma once

#include <stdexcept>
#include <string>

namespace bspace {

// Failure categories map one-to-one onto CLI exit codes:
// validation/usage -> 1, numerical -> 2, io -> 3.

/// Input violates a precondition or invariant of the quantity being built.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Caller misused an API (wrong field space, empty list, unknown label).
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Step-size underflow or similar breakdown inside a numerical kernel.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what + " (t/T = " + std::to_string(time) + ")"), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace bspace
