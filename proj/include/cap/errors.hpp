#pragma once

#include <stdexcept>
#include <string>

namespace cap {

/// Base class for every error raised by the engine.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Objects built over state spaces of different sizes were combined.
class DimensionMismatch : public Error {
public:
    using Error::Error;
};

/// An argument violates an operation's precondition (mixture weight out of
/// range, empty family, non-supermodular capacity, wrong model variant, ...).
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Scenario input failed validation. The message carries the path of the
/// offending entry, e.g. `queries[3].lottery[1]`.
class ValidationError : public Error {
public:
    ValidationError(std::string path, const std::string& what)
        : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

} // namespace cap
