#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "zw/errors.hpp"

namespace zw::specfun {

using cplx = std::complex<double>;

// Tolerance used to decide whether a floating parameter sits exactly on an
// integer (pole detection, terminating-series detection).
inline constexpr double kIntegerTol = 1e-12;

// Parameters closer than this to a forbidden integer, without being exactly
// on it, are rejected. Perturbation policy lives in the callers.
inline constexpr double kCollisionTol = 1e-8;

bool is_nonpositive_integer(cplx v, double tol = kIntegerTol);
bool is_near_nonpositive_integer(cplx v, double tol = kCollisionTol);

// A complex value carried as (log magnitude, phase). Products and quotients
// of gamma factors are accumulated here and exponentiated once, so that
// intermediate magnitudes never overflow.
struct SignedLogComplex {
    double log_mag;  // -inf encodes an exact zero
    double phase;    // radians; not reduced mod 2*pi

    static SignedLogComplex zero();
    static SignedLogComplex one();
    static SignedLogComplex from(cplx v);
    static SignedLogComplex from_log(cplx log_value);

    bool is_zero() const;
    cplx value() const;
    // Real part of value(); checks the phase is consistent with a real number.
    double real_value(double slack = 1e-8) const;

    SignedLogComplex& operator*=(const SignedLogComplex& o);
    SignedLogComplex& operator/=(const SignedLogComplex& o);
    friend SignedLogComplex operator*(SignedLogComplex a, const SignedLogComplex& b) { return a *= b; }
    friend SignedLogComplex operator/(SignedLogComplex a, const SignedLogComplex& b) { return a /= b; }
};

// Principal branch of log Gamma. Poles at 0, -1, -2, ... throw PoleError.
// Real arguments below the poles are treated as limits from the upper half
// plane, which keeps products of reflection formulas consistent.
cplx log_gamma(cplx zeta);

// prod Gamma(num[i]) / prod Gamma(den[j]) assembled in log space.
// A pole in a denominator (with all numerators regular) gives an exact zero.
// A pole in a numerator throws PoleError unless a denominator has one too,
// in which case the ratio is indeterminate and also throws.
SignedLogComplex gamma_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den);

// (a)_k = a (a+1) ... (a+k-1), exact zero when the product crosses zero.
cplx pochhammer(cplx a, long long k);

// Gauss hypergeometric function, analytically continued to C \ [1, inf).
// Direct series for small |u|; otherwise the linear-fractional
// transformations of the argument, choosing the one that minimises the
// mapped argument's modulus.
cplx hyp2f1(cplx a, cplx b, cplx c, cplx u);

struct Hyp3F2Result {
    cplx regularized;                  // 3F2[a,b,c;e,f|1] / (Gamma(e)Gamma(f)Gamma(e+f-a-b-c))
    SignedLogComplex regularized_log;  // same value kept in log space
    std::optional<cplx> raw;           // unregularized value, when it exists
    double tail_bound = 0.0;           // certified bound on the neglected series tail
};

// Regularized 3F2 at unit argument, entire in all five parameters.
// Terminating series are summed exactly; otherwise the evaluation is routed
// through the two-term Thomae relations to a parametrization whose series
// converges fast.
Hyp3F2Result hyp3f2_reg(cplx a, cplx b, cplx c, cplx e, cplx f);

// Convenience: raw 3F2[a,b,c;e,f|1]; throws ConvergenceError when the series
// neither terminates nor converges.
cplx hyp3f2(cplx a, cplx b, cplx c, cplx e, cplx f);

}  // namespace zw::specfun
