#pragma once

#include <stdexcept>
#include <string>

namespace zw {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Pole of a gamma factor, or an evaluation point sitting on a pole lattice.
struct PoleError : Error {
    explicit PoleError(const std::string& msg) : Error(msg) {}
};

// Parameters outside the domain a formula is valid on.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A series or quadrature failed to reach the requested accuracy.
struct ConvergenceError : Error {
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// Exact integer arithmetic left the representable range.
struct OverflowError : Error {
    explicit OverflowError(const std::string& msg) : Error(msg) {}
};

}  // namespace zw
