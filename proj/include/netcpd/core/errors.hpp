#pragma once

#include <stdexcept>
#include <string>

namespace netcpd {

/// Invalid configuration; `field()` names the offending entry.
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string field, const std::string& message)
        : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed or inconsistent input data (event files, batches, traces).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A posterior left its valid domain (non-finite or non-positive parameters).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace netcpd
