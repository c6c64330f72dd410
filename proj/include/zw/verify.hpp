#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "zw/zw_measure.hpp"

namespace zw::verify {

struct CheckResult {
    std::string name;
    double residual = 0.0;
    double tol = 0.0;
    bool pass = false;
};

// Hypergeometric identities over random parameter draws: the differential
// equation, the two-term transformation, the contiguity relation, the
// four-term sine identity, and the pair of continuation relations.
std::vector<CheckResult> identity_suite(std::uint64_t seed, int draws);

// Symmetries of the finite-size and limit kernels at the given parameters.
std::vector<CheckResult> symmetry_suite(const meas::ZWParams& p, int n);

// Everything, as run by the command-line `verify`.
std::vector<CheckResult> run_all(const meas::ZWParams& p, int n, std::uint64_t seed);

}  // namespace zw::verify
