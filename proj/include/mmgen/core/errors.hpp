#pragma once

#include <stdexcept>
#include <string>

namespace mmgen {

/// Invalid configuration, manifest, or scene description. CLI exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// File access or parse failure. CLI exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computation left the model's validity domain. CLI exit code 4.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace mmgen
