#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mpc {

/// Contract violation on an operation input (non-finite value, negative
/// distance, inverted range, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Training data cannot support the requested construction (empty score
/// lists, no authentication cycles yet).
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Calibration fit received samples of a single class.
class DegenerateLabels : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file; carries the 1-based line of the offending row.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, std::size_t line)
        : std::runtime_error(msg + " (line " + std::to_string(line) + ")"),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unknown key, unparsable value, or invalid combination in a run
/// configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mpc
