#pragma once

#include <stdexcept>
#include <string>

namespace tnt {

/// Invalid configuration or input (bad bounds, unknown problem, malformed
/// config file). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure (non-positive-definite kernel after jitter escalation,
/// singular covariance, failed triangular solve). CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace tnt
