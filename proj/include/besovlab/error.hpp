#pragma once

#include <stdexcept>
#include <string>

namespace besovlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on user-supplied parameters was violated (bad grid,
/// index out of range, malformed config).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// The time integrator produced non-finite values or crossed the
/// configured sup-norm ceiling.
class BlowUpError : public Error {
public:
    BlowUpError(double time, const std::string& what)
        : Error(what), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

} // namespace besovlab
