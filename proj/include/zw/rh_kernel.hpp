#pragma once

#include <complex>

#include "zw/errors.hpp"
#include "zw/orthopoly.hpp"
#include "zw/zw_measure.hpp"

namespace zw::rh {

using cplx = std::complex<double>;

// Evaluation is refused closer than this to the removable singularities;
// callers average two perturbed evaluations instead.
inline constexpr double kSigmaMin = 1e-4;
inline constexpr double kDeltaMin = 1e-4;   // distance of z - z' from the integers
inline constexpr double kPerturb = 1e-5;    // half-width of the perturb-and-average step

// Lattice weights attached to the two-component split. psi_out vanishes
// where a degenerate pair kills the weight; psi_in is strictly positive on
// the inner points for the allowed parameter set.
double psi_in(const meas::ZWParams& p, int n, double x);
double psi_out(const meas::ZWParams& p, int n, double x);
double psi_point(const meas::ZWParams& p, int n, meas::LatticePoint x);
// psi_out on the outer points, 1/psi_in on the inner ones.
double psi_cap(const meas::ZWParams& p, int n, meas::LatticePoint x);

struct RHPair {
    cplx R, S;
};

// Meromorphic solutions normalized to (1, 0) at infinity. The outer pair has
// its poles on the inner lattice; the inner pair on the outer lattice.
RHPair rh_out(const meas::ZWParams& p, int n, cplx zeta);
RHPair rh_in(const meas::ZWParams& p, int n, cplx zeta);

// Correlation kernel at size N in block form over the in/out split, with
// sqrt(psi) prefactors; diagonal values by the derivative form with central
// differences and one Richardson step. Removable singularities at Sigma = 0
// and z - z' integral are handled by averaging two perturbed evaluations.
double kernel_KN(const meas::ZWParams& p, int n, meas::LatticePoint x, meas::LatticePoint y);

// True when the parameters need the perturb-and-average policy.
bool needs_perturbation(const meas::ZWParams& p);

}  // namespace zw::rh
