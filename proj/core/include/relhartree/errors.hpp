#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace relhartree {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad grid size, parameter out of range, unknown key, ...).
/// Maps to process exit code 2.
struct ConfigError : Error {
    using Error::Error;
};

/// Contract misuse by the caller (wrong-space field, grid mismatch, ...).
/// Maps to process exit code 2.
struct UsageError : Error {
    using Error::Error;
};

/// Requested scale outside the resolvable band.
struct BandRangeError : ConfigError {
    using ConfigError::ConfigError;
};

/// Resource cap exceeded (e.g. 4D symbol grid too large).
struct SizeError : ConfigError {
    using ConfigError::ConfigError;
};

/// Decay-fit preconditions violated (too few samples, non-positive values).
struct FitError : ConfigError {
    using ConfigError::ConfigError;
};

/// Non-finite values or overflow during computation. Maps to exit code 3.
struct NumericError : Error {
    using Error::Error;
};

/// Simulation aborted: sup norm exceeded the blow-up threshold or went
/// non-finite. Carries the time of failure and the sampled sup-norm history
/// so the caller can attach the partial time series.
struct BlowUpError : NumericError {
    BlowUpError(const std::string& msg, double t_fail, std::vector<double> history)
        : NumericError(msg), t(t_fail), sup_history(std::move(history)) {}
    double t;
    std::vector<double> sup_history;
};

} // namespace relhartree
