#pragma once

#include <stdexcept>
#include <string>

namespace promptcast {

/// Invalid configuration or unusable input (missing file, malformed config,
/// usage mistake). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Data that violates a contract at run time (malformed row, misaligned
/// files, empty metric input). The CLI maps this to exit code 1.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace promptcast
