// Exception hierarchy. The CLI maps these onto process exit codes:
// ConfigError -> 2, PhysicsError (and subclasses) -> 3, IoError -> 4.
#pragma once

#include <stdexcept>
#include <string>

namespace rsq {

// Malformed or inconsistent user input (config file, CLI flag values).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Physically invalid operating point: unstable drift matrix, fold/bistability,
// non-converged solver, settle-time too short, and the like.
class PhysicsError : public std::runtime_error {
public:
    explicit PhysicsError(const std::string& msg) : std::runtime_error(msg) {}
};

// Near-defective eigensystem (condition number above threshold); callers may
// catch this specifically and fall back to the time-domain path.
class IllConditionedError : public PhysicsError {
public:
    explicit IllConditionedError(const std::string& msg) : PhysicsError(msg) {}
};

// Filesystem failures (unreadable config, unwritable output directory).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace rsq
