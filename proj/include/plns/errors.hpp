#pragma once

#include <stdexcept>
#include <string>

namespace plns {

// Bad user input or a violated operation precondition.
class InvalidInput : public std::runtime_error {
public:
    explicit InvalidInput(const std::string& msg) : std::runtime_error(msg) {}
};

// Transport CFL bound exceeded; the caller may retry with a smaller dt.
class CflViolation : public std::runtime_error {
public:
    explicit CflViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Density dropped below the configured floor delta.
class DensityFloorViolation : public std::runtime_error {
public:
    explicit DensityFloorViolation(const std::string& msg) : std::runtime_error(msg) {}
};

// Linear-algebra or iteration failure inside the stepper.
class NumericalBreakdown : public std::runtime_error {
public:
    explicit NumericalBreakdown(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace plns
