#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace localcodes {

// Error hierarchy. The CLI maps each family onto an exit code:
// UsageError -> 1, ConfigError/GenerationError/DataError -> 2,
// TrainingError/FitError -> 3.

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenerationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class TrainingError : public std::runtime_error {
public:
    TrainingError(const std::string& what, std::size_t epoch)
        : std::runtime_error(what + " (epoch " + std::to_string(epoch) + ")"), epoch_(epoch) {}

    std::size_t epoch() const noexcept { return epoch_; }

private:
    std::size_t epoch_;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace localcodes
