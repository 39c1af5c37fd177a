#pragma once

#include <stdexcept>
#include <string>

namespace sbts {

// Matrix mass drifted away from 1.0 beyond tolerance; skill estimates
// would be meaningless.
class DegenerateMassError : public std::runtime_error {
public:
    explicit DegenerateMassError(const std::string& what) : std::runtime_error(what) {}
};

// Categorical sampling over all-zero effective weights.
class EmptySupportError : public std::runtime_error {
public:
    explicit EmptySupportError(const std::string& what) : std::runtime_error(what) {}
};

// Comparison table asked for a baseline label that is not present.
class UnknownBaselineError : public std::runtime_error {
public:
    explicit UnknownBaselineError(const std::string& what) : std::runtime_error(what) {}
};

// Bad flag, bad value, or inconsistent flag combination.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// File output failed; message carries path and cause.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sbts
