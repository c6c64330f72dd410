#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "zw/errors.hpp"
#include "zw/specfun.hpp"

namespace zw::meas {

using cplx = std::complex<double>;

// Non-increasing integer tuple of fixed length.
struct Signature {
    std::vector<long long> parts;

    Signature() = default;
    explicit Signature(std::vector<long long> p);

    int n() const { return static_cast<int>(parts.size()); }
    bool operator==(const Signature& o) const { return parts == o.parts; }

    // "4,2,2,0,-1,-2,-2"
    static Signature parse(const std::string& text);
    std::string str() const;
};

// Frobenius data of the (positive, negative) diagram pair.
struct FrobeniusCoords {
    std::vector<long long> p_plus, q_plus;   // lengths d_plus
    std::vector<long long> p_minus, q_minus; // lengths d_minus
    int d_plus() const { return static_cast<int>(p_plus.size()); }
    int d_minus() const { return static_cast<int>(p_minus.size()); }
};

FrobeniusCoords frobenius(const Signature& lam);

// Point of the half-integer shifted lattice; 2x is stored so arithmetic is
// exact. The parity of `doubled` must match N-1.
struct LatticePoint {
    long long doubled;
    int n;

    double value() const { return 0.5 * static_cast<double>(doubled); }
    bool is_inner() const { return std::llabs(doubled) < n; }  // |x| < N/2
    bool operator==(const LatticePoint& o) const { return doubled == o.doubled && n == o.n; }
    bool operator<(const LatticePoint& o) const { return doubled < o.doubled; }
};

LatticePoint lattice_point(int n, long long doubled);
// Lattice point closest to the real number v; ties broken toward -infinity.
LatticePoint nearest_lattice_point(int n, double v);

enum class PairClass { Principal, Complementary, Degenerate, Outside };

struct PairInfo {
    PairClass cls = PairClass::Outside;
    long long m = 0;  // interval index (Complementary) or the integer member (Degenerate)
    bool in_Z() const { return cls != PairClass::Outside; }
};

struct ZWParams {
    cplx z, zp, w, wp;
    bool exact = false;  // inputs given as exact integers/rationals

    cplx sigma() const { return z + zp + w + wp; }

    PairInfo class_zz;
    PairInfo class_ww;
    bool admissible = false;      // both pairs in Z, Re Sigma > -1, degenerate k+l >= 0
    bool in_D0 = false;           // Re Sigma > -1 and the normalizer has no zero
    bool in_D_adm_prime = false;  // admissible and no degenerate pair with m < 0
};

// Fills the classification fields from the raw quadruple.
ZWParams classify(cplx z, cplx zp, cplx w, cplx wp, bool exact = false);

// Weyl dimension, exact integer arithmetic; throws OverflowError when the
// value leaves the 128-bit range.
long long dim_weyl(const Signature& lam);
// log of the Weyl dimension, usable at any size.
double log_dim_weyl(const Signature& lam);

// Weight on the lattice whose squared-Vandermonde ensemble reproduces the
// measure below: 1/(Gamma(z-x+c)Gamma(z'-x+c)Gamma(w+x+c)Gamma(w'+x+c)),
// c = (N+1)/2. Exact zero at gamma poles.
double weight_f(const ZWParams& p, int n, LatticePoint x);
double weight_f(const ZWParams& p, int n, double x);  // same formula off the lattice

struct MeasureValue {
    double p_prime;  // unnormalized weight of the signature
    cplx s_norm;     // closed-form normalizer
    double p_n;      // p_prime / s_norm
};

MeasureValue measure(const ZWParams& p, const Signature& lam);
cplx normalizer(const ZWParams& p, int n);

// Dim_{N-1}(nu)/Dim_N(lam) when nu interlaces lam, else 0.
double cotransition_q(const Signature& nu, const Signature& lam);
bool interlaces(const Signature& nu, const Signature& lam);

// |P_{N-1}(nu) - sum_lam q(nu,lam) P_N(lam)| over lam within the window.
double coherency_residual(const ZWParams& p, int n, const Signature& nu, long long window);

// Particle configuration maps. L(lam) = {lam_i + (N+1)/2 - i}; X(lam) is the
// symmetric difference of L(lam) with the inner part of the lattice.
std::vector<LatticePoint> lambda_to_L(const Signature& lam);
std::vector<LatticePoint> lambda_to_X(const Signature& lam);
Signature X_to_lambda(const std::vector<LatticePoint>& conf, int n);

// All signatures with k >= lam_1 >= ... >= lam_N >= -l.
std::vector<Signature> enumerate_support(long long k, long long l, int n,
                                         std::uint64_t cap = 2'000'000);

// All non-increasing integer tuples within [lo, hi]^N (windowed enumeration).
std::vector<Signature> enumerate_box(long long lo, long long hi, int n,
                                     std::uint64_t cap = 2'000'000);

}  // namespace zw::meas
