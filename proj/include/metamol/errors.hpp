// errors.hpp — error categories used to map failures onto CLI exit codes

#pragma once

#include <stdexcept>
#include <string>

namespace metamol {

// A validity guard tripped during a run (boundary mass, instability, ...).
struct GuardError : std::runtime_error {
    explicit GuardError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed configuration or input file.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace metamol
