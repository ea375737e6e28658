#pragma once

#include <stdexcept>
#include <string>

namespace tsadam {

// Error taxonomy shared by all modules. The CLI maps each class to a
// distinct exit code; contract violations (bad arguments to library
// calls) use std::invalid_argument directly.

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Inputs that are structurally valid but make the requested statistic
// undefined (constant series, zero-variance differences, zero MASE scale).
class DegenerateInputError : public NumericalError {
public:
    explicit DegenerateInputError(const std::string& what) : NumericalError(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace tsadam
