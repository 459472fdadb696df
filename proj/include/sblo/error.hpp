#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sblo {

/// Invalid argument or violated precondition.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Malformed or unusable input data.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A line in an edge-list file could not be parsed.
class ParseError : public DataError {
public:
    ParseError(const std::string &path, std::size_t line, const std::string &what)
        : DataError(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// Inputs that are individually valid but do not belong together
/// (different user universes, a factor matrix fitted on another network).
class ConsistencyError : public DataError {
public:
    using DataError::DataError;
};

/// A linear solve failed or did not reach the requested accuracy.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string &what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// Bad or incomplete experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sblo
