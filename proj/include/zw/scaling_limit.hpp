#pragma once

#include <complex>
#include <vector>

#include "zw/dpp_core.hpp"
#include "zw/errors.hpp"
#include "zw/zw_measure.hpp"

namespace zw::lim {

using cplx = std::complex<double>;

// Boundary coordinates: finitely many nonincreasing nonnegative rows plus
// the two mass parameters.
struct OmegaPoint {
    std::vector<double> alpha_plus, beta_plus, alpha_minus, beta_minus;
    double delta_plus = 0.0, delta_minus = 0.0;

    void validate() const;  // row ordering, beta bound, mass inequality
    double gamma_plus() const;
    double gamma_minus() const;
};

// Embedding into point configurations on the doubly punctured line; zeros in
// the rows and ones in the beta rows are omitted.
std::vector<double> iota(const OmegaPoint& om);

// Limit weights on (1/2, inf) u (-inf, -1/2) and (-1/2, 1/2).
double limit_psi_out(const meas::ZWParams& p, double x);
double limit_psi_in(const meas::ZWParams& p, double x);

struct RHPair {
    cplx R, S;
};

// Limit solutions; analytic off the inner segment (outer pair) and off the
// outer rays (inner pair). For real arguments on the reflected side the
// evaluation is routed through the substitution x -> -x, (z,z') <-> (w,w')
// to keep the hypergeometric argument small; allow_swap = false forces the
// direct formulas.
RHPair limit_rh_out(const meas::ZWParams& p, cplx x, bool allow_swap = true);
RHPair limit_rh_in(const meas::ZWParams& p, cplx x, bool allow_swap = true);

// Limit correlation kernel on the doubly punctured line, block form with
// sqrt(psi) prefactors; diagonal via the derivative form.
double kernel_K(const meas::ZWParams& p, double x, double y);

// Limit of the resolvent seed: sqrt(psi_out psi_in)/(x - y) on mixed
// regions, zero on like regions.
double limit_L(const meas::ZWParams& p, double x, double y);

// Residuals of the two jump relations at the point x (inner or outer),
// using boundary values at x +- ih.
struct BranchResiduals {
    double first = 0.0;   // jump of S against the opposite R
    double second = 0.0;  // jump of R against the opposite S
};
BranchResiduals branching_check(const meas::ZWParams& p, double x, double h);

// Gap probability det(1 - K) on (s, inf) by Nystrom quadrature.
double gap_probability(const meas::ZWParams& p, double s, int order);

struct PviPoint {
    double s = 0.0;
    double residual = 0.0;  // defect of the sigma-form equation
    double scale = 1.0;     // 1 + |sigma'|^3
};
std::vector<PviPoint> pvi_sigma_residual(const meas::ZWParams& p,
                                         const std::vector<double>& s_grid, int order);

struct LadderEntry {
    int n = 0;
    double sup_err = 0.0;
};
// Scaled integral-parameter kernels against the continuous rank-(k+l)
// Jacobi kernel on an inner grid.
std::vector<LadderEntry> jacobi_limit_check(long long k, long long l, double zp, double wp,
                                            const std::vector<int>& n_list,
                                            const std::vector<double>& grid);

// Scaled finite-size kernels against the limit kernel on a grid of pairs.
std::vector<LadderEntry> kernel_convergence(const meas::ZWParams& p,
                                            const std::vector<int>& n_list,
                                            const std::vector<double>& grid);

}  // namespace zw::lim
