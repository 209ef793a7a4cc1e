#pragma once

#include <stdexcept>
#include <string>

namespace rdesn {

/// Invalid configuration, dimensions, or preconditions. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: blow-up, non-finite values, singular systems. CLI exit code 3.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// File format or inventory problems on load/save.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rdesn
