#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "zw/errors.hpp"
#include "zw/zw_measure.hpp"

namespace zw::dpp {

// Finite window of the shifted lattice, inner part always included, plus a
// certified bound on the neglected outer mass entering the resolvent.
struct TruncatedLattice {
    int n = 0;
    std::vector<meas::LatticePoint> points;  // ascending
    double tail_bound = 0.0;

    static TruncatedLattice make(const meas::ZWParams& p, int n, double radius);

    size_t size() const { return points.size(); }
    // index of a lattice point in the window, or -1
    long long index_of(meas::LatticePoint x) const;
};

enum class RefMeasure { Counting, CountingOverN };

// Dense kernel over a window, block-structured by the in/out classification
// of its points.
struct BlockKernel {
    TruncatedLattice lattice;
    Eigen::MatrixXd values;
    RefMeasure ref = RefMeasure::Counting;

    double at(meas::LatticePoint x, meas::LatticePoint y) const;
    // J-symmetry defect: like blocks symmetric, mixed blocks antisymmetric
    double j_symmetry_defect() const;
};

// Two-component resolvent seed [[0, A], [-A^T, 0]] with
// A(a,b) = sqrt(psi_out(a) psi_in(b)) / (a - b).
BlockKernel build_L(const meas::ZWParams& p, const TruncatedLattice& lat);

// K = L (1 + L)^{-1} by a dense solve.
BlockKernel k_from_l(const BlockKernel& L);

// Rank-N projection kernel of the orthogonal-polynomial system on the window.
BlockKernel cd_kernel_matrix(const meas::ZWParams& p, const TruncatedLattice& lat);

// Particle-hole swap on the set Z: rows in Z become delta - K.
BlockKernel complement_kernel(const BlockKernel& K, const std::vector<meas::LatticePoint>& Z);

// Sign of the product of distances to the inner lattice (the point itself
// omitted when inner).
int epsilon_sign(meas::LatticePoint x);

// Determinant of the kernel minor over the given points.
double correlation_rho(const BlockKernel& K, const std::vector<meas::LatticePoint>& pts);

struct OracleValue {
    double value = 0.0;
    double err = 0.0;  // certified enumeration tail (zero in exact mode)
};

// Correlation function by direct enumeration of signatures: exact over the
// finite degenerate support, or over a box window otherwise.
OracleValue brute_force_rho(const meas::ZWParams& p, int n,
                            const std::vector<meas::LatticePoint>& pts,
                            long long window = 0);

// Draws from the size-N projection process and maps the configurations back
// to signatures. Deterministic for a fixed seed.
std::vector<meas::Signature> sample_process(const meas::ZWParams& p, int n,
                                            std::uint64_t seed, int count,
                                            double radius = 0.0);

// Gauss-Legendre rule on (-1, 1).
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

// Nystrom approximation of det(1 - K) on a finite interval.
double fredholm_det(const std::function<double(double, double)>& kernel, double a, double b,
                    int order);
// Same on (s, infinity) through the substitution t = s + u/(1-u).
double fredholm_det_halfline(const std::function<double(double, double)>& kernel, double s,
                             int order);

// Doubles the order and reports failure when the value has not settled.
double fredholm_det_checked(const std::function<double(double, double)>& kernel, double a,
                            double b, int order, double tol);

}  // namespace zw::dpp
