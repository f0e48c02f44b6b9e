#pragma once

#include <stdexcept>
#include <string>

namespace memsnn {

/// Invalid or inconsistent configuration. Always raised before any stepping.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical failure during a run (non-finite drive, bad step size, ...).
class SimulationFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace memsnn
