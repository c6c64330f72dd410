#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "zw/errors.hpp"
#include "zw/zw_measure.hpp"

namespace zw::ortho {

using cplx = std::complex<double>;

// Parameters of the discrete weight 1/(G(u+1-t)G(u'+1-t)G(v+1+t)G(v'+1+t))
// on the integers. Under t = x + (N-1)/2 it matches the lattice weight of
// zw::meas::weight_f with u = z+N-1, u' = z'+N-1, v = w, v' = w'.
struct ALParams {
    cplx u, up, v, vp;

    cplx frakS() const { return u + up + v + vp; }
    static ALParams from(const meas::ZWParams& p, int n) {
        return {p.z + (n - 1.0), p.zp + (n - 1.0), p.w, p.wp};
    }
};

// Weight value g(t); real for admissible parameter shapes.
double al_weight(const ALParams& p, double t);

// Monic orthogonal polynomial of degree m for the weight above, evaluated by
// a terminating hypergeometric sum completed to a polynomial. Requires
// Re frakS > 2m - 2. `lower_bump` raises the first lower parameter by one,
// giving the companion polynomial used to continue the two-point kernel
// through frakS = 2m - 2.
cplx al_value(int m, const ALParams& p, cplx t, int lower_bump = 0);
specfun::SignedLogComplex al_value_log(int m, const ALParams& p, cplx t, int lower_bump = 0);

// Squared norm sum_t p_m(t)^2 g(t) in closed form; requires Re frakS > 2m-1.
cplx al_norm(int m, const ALParams& p);

std::pair<cplx, cplx> askey_lesky(int m, const ALParams& p, cplx t);

// Degree-N and degree-(N-1) monic polynomials for the lattice weight, on the
// x scale, plus the companion form and the (N-1)st norm.
cplx poly_pN(const meas::ZWParams& p, int n, cplx x);
cplx poly_pN_tilde(const meas::ZWParams& p, int n, cplx x);
cplx poly_pNm1(const meas::ZWParams& p, int n, cplx x);
cplx norm_hNm1(const meas::ZWParams& p, int n);

// Normalized Christoffel-Darboux kernel of rank N for the lattice weight,
// with the sqrt(f(x)f(y)) factor. Two-point form off the diagonal (companion
// form near Sigma = 0), rank sum on the diagonal.
double cd_kernel_tilde(const meas::ZWParams& p, int n, meas::LatticePoint x,
                       meas::LatticePoint y);

// Monic orthogonal polynomials on a finite node set, built by the Stieltjes
// recurrence with compensated inner products.
struct FiniteOrthoSystem {
    std::vector<double> nodes, weight;
    std::vector<double> alpha, beta;               // three-term recurrence
    std::vector<double> norms;                     // h_m = (p_m, p_m)
    std::vector<std::vector<double>> values;       // values[m][i] = p_m(node i)
    int degree_cap = 0;

    double eval(int m, double x) const;            // recurrence evaluation
    double ortho_residual() const;                 // max off-diagonal Gram entry
};

FiniteOrthoSystem finite_orthogonalize(const std::vector<double>& nodes,
                                       const std::vector<double>& weight, int degree_cap);

// Rank-m normalized Christoffel-Darboux kernel for the Jacobi weight
// (1/2-x)^alpha (1/2+x)^beta on (-1/2, 1/2), via the standard three-term
// recurrence mapped from (-1,1).
double jacobi_cd_kernel(int m, double alpha, double beta, double x, double y);

// Finite lattice {-(N-1)/2-l, ..., (N-1)/2+k} and the dual weight carried by
// the hole configuration at integral (z, w) = (k, l).
std::vector<double> hahn_nodes(long long k, long long l, int n);
double hahn_weight(long long k, long long l, int n, double zp, double wp, double y);

// Rank-(k+l) normalized Christoffel-Darboux kernel of the system above.
double hahn_cd_kernel(long long k, long long l, int n, double zp, double wp, double x,
                      double y);

}  // namespace zw::ortho
