#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nsfv {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the set where a state-law quantity is defined
/// (e.g. vacuum for the internal energy, θ ≤ 0 for a singular coefficient).
class DomainError : public Error {
public:
    using Error::Error;
};

class IndexOutOfRange : public Error {
public:
    using Error::Error;
};

class NegativeInput : public Error {
public:
    using Error::Error;
};

/// An iterative solve ran out of budget. `history` holds whatever residual
/// or update norms the solver recorded on the way.
class ConvergenceFailure : public Error {
public:
    ConvergenceFailure(const std::string& what, std::vector<double> history = {})
        : Error(what), history_(std::move(history)) {}

    [[nodiscard]] const std::vector<double>& history() const noexcept { return history_; }

private:
    std::vector<double> history_;
};

/// Density positivity lost, non-finite values, or an inversion that failed
/// inside a field update.
class NonPhysicalState : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

class FormatError : public Error {
public:
    using Error::Error;
};

class IOError : public Error {
public:
    using Error::Error;
};

}  // namespace nsfv
