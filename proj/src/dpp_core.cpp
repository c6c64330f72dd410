#include "zw/dpp_core.hpp"

#include <algorithm>
#include <cmath>

#include "zw/orthopoly.hpp"
#include "zw/rh_kernel.hpp"

namespace zw::dpp {

using meas::LatticePoint;
using meas::Signature;
using meas::ZWParams;

TruncatedLattice TruncatedLattice::make(const ZWParams& p, int n, double radius) {
    if (radius < 0.5 * n) radius = 0.5 * n;
    TruncatedLattice lat;
    lat.n = n;
    long long dmax = 2 * static_cast<long long>(std::floor(radius)) + ((n - 1) & 1LL);
    for (long long d = -dmax; d <= dmax; d += 2) lat.points.push_back({d, n});

    // neglected outer mass: sum of psi_out beyond the window, damped by the
    // squared distance to the bulk, times the largest inner weight
    double max_in = 0.0;
    for (const auto& x : lat.points) {
        if (!x.is_inner()) continue;
        try {
            max_in = std::max(max_in, rh::psi_in(p, n, x.value()));
        } catch (const Error&) {
            // inner weight degenerates to zero here; the point carries no mass
        }
    }
    double tail = 0.0;
    double edge = 0.5 * static_cast<double>(dmax);
    double sig = p.sigma().real();
    for (int side = 0; side < 2; ++side) {
        double last = 0.0, x = 0.0;
        for (long long j = 1; j <= 4000; ++j) {
            x = (side ? -1.0 : 1.0) * (edge + static_cast<double>(j));
            double po = rh::psi_out(p, n, x);
            double dist = std::abs(x) - 0.5 * (n - 1);
            last = po / (dist * dist);
            tail += last;
            if (last < 1e-18) break;
        }
        // polynomial remainder beyond the explicit sweep
        if (last > 0.0) tail += last * std::abs(x) / std::max(sig + 1.0, 1e-2);
    }
    lat.tail_bound = tail * max_in;
    return lat;
}

long long TruncatedLattice::index_of(LatticePoint x) const {
    if (points.empty() || x.n != n) return -1;
    long long lo = points.front().doubled;
    if (x.doubled < lo || x.doubled > points.back().doubled) return -1;
    if (((x.doubled - lo) & 1LL) != 0) return -1;
    return (x.doubled - lo) / 2;
}

double BlockKernel::at(LatticePoint x, LatticePoint y) const {
    long long i = lattice.index_of(x), j = lattice.index_of(y);
    if (i < 0 || j < 0) throw DomainError("BlockKernel::at: point outside the window");
    return values(i, j);
}

double BlockKernel::j_symmetry_defect() const {
    double worst = 0.0;
    const auto& pts = lattice.points;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
            double sign = (pts[i].is_inner() == pts[j].is_inner()) ? 1.0 : -1.0;
            worst = std::max(worst, std::abs(values(static_cast<long long>(i), static_cast<long long>(j)) -
                                             sign * values(static_cast<long long>(j), static_cast<long long>(i))));
        }
    return worst;
}

BlockKernel build_L(const ZWParams& p, const TruncatedLattice& lat) {
    if (!p.in_D_adm_prime) throw DomainError("build_L: parameters outside the allowed set");
    const long long m = static_cast<long long>(lat.size());
    BlockKernel L;
    L.lattice = lat;
    L.values = Eigen::MatrixXd::Zero(m, m);
    std::vector<double> root_psi(static_cast<size_t>(m));
    for (long long i = 0; i < m; ++i) {
        const auto& x = lat.points[static_cast<size_t>(i)];
        double psi = x.is_inner() ? rh::psi_in(p, lat.n, x.value()) : rh::psi_out(p, lat.n, x.value());
        root_psi[static_cast<size_t>(i)] = std::sqrt(psi);
    }
    for (long long i = 0; i < m; ++i) {
        const auto& a = lat.points[static_cast<size_t>(i)];
        if (a.is_inner()) continue;
        for (long long j = 0; j < m; ++j) {
            const auto& b = lat.points[static_cast<size_t>(j)];
            if (!b.is_inner()) continue;
            double v = root_psi[static_cast<size_t>(i)] * root_psi[static_cast<size_t>(j)] /
                       (a.value() - b.value());
            L.values(i, j) = v;
            L.values(j, i) = -v;
        }
    }
    return L;
}

BlockKernel k_from_l(const BlockKernel& L) {
    const long long m = L.values.rows();
    Eigen::MatrixXd one_plus = Eigen::MatrixXd::Identity(m, m) + L.values;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(one_plus);
    BlockKernel K;
    K.lattice = L.lattice;
    // K = L (1+L)^{-1} = 1 - (1+L)^{-1}
    K.values = Eigen::MatrixXd::Identity(m, m) - lu.inverse();
    double residual = (one_plus * K.values - L.values).norm();
    if (!std::isfinite(residual) || residual > 1e-8 * (1.0 + L.values.norm()))
        throw ConvergenceError("k_from_l: resolvent solve is numerically degenerate");
    return K;
}

BlockKernel cd_kernel_matrix(const ZWParams& p, const TruncatedLattice& lat) {
    const long long m = static_cast<long long>(lat.size());
    BlockKernel K;
    K.lattice = lat;
    K.values = Eigen::MatrixXd::Zero(m, m);
    for (long long i = 0; i < m; ++i)
        for (long long j = i; j < m; ++j) {
            double v = ortho::cd_kernel_tilde(p, lat.n, lat.points[static_cast<size_t>(i)],
                                              lat.points[static_cast<size_t>(j)]);
            K.values(i, j) = v;
            K.values(j, i) = v;
        }
    return K;
}

BlockKernel complement_kernel(const BlockKernel& K, const std::vector<LatticePoint>& Z) {
    BlockKernel out = K;
    for (const auto& x : Z) {
        long long i = K.lattice.index_of(x);
        if (i < 0) throw DomainError("complement_kernel: swap point outside the window");
        out.values.row(i) = -K.values.row(i);
        out.values(i, i) += 1.0;
    }
    return out;
}

int epsilon_sign(LatticePoint x) {
    int n = x.n;
    if (!x.is_inner()) {
        if (x.doubled > 0) return 1;
        return (n % 2 == 0) ? 1 : -1;
    }
    long long r = (x.doubled + (n - 1)) / 2;  // position from the bottom
    return ((n - 1 - r) % 2 == 0) ? 1 : -1;
}

double correlation_rho(const BlockKernel& K, const std::vector<LatticePoint>& pts) {
    const long long m = static_cast<long long>(pts.size());
    Eigen::MatrixXd minor(m, m);
    for (long long i = 0; i < m; ++i)
        for (long long j = 0; j < m; ++j)
            minor(i, j) = K.at(pts[static_cast<size_t>(i)], pts[static_cast<size_t>(j)]);
    return minor.determinant();
}

OracleValue brute_force_rho(const ZWParams& p, int n, const std::vector<LatticePoint>& pts,
                            long long window) {
    bool degenerate = p.class_zz.cls == meas::PairClass::Degenerate &&
                      p.class_ww.cls == meas::PairClass::Degenerate;
    std::vector<Signature> sigs;
    OracleValue out;
    if (degenerate) {
        sigs = meas::enumerate_support(p.class_zz.m, p.class_ww.m, n);
    } else {
        if (window <= 0) throw DomainError("brute_force_rho: window required away from the degenerate case");
        sigs = meas::enumerate_box(-window, window, n);
    }
    double total = 0.0;
    for (const auto& lam : sigs) {
        double mass = meas::measure(p, lam).p_n;
        total += mass;
        if (mass == 0.0) continue;
        auto X = meas::lambda_to_X(lam);
        bool contains = true;
        for (const auto& q : pts) {
            if (std::find(X.begin(), X.end(), q) == X.end()) { contains = false; break; }
        }
        if (contains) out.value += mass;
    }
    out.err = degenerate ? 0.0 : std::max(0.0, 1.0 - total);
    return out;
}

namespace {

// counter-based generator: a fixed avalanche of (seed, counter)
struct CounterRng {
    std::uint64_t seed;
    std::uint64_t counter = 0;
    explicit CounterRng(std::uint64_t s) : seed(s) {}
    double uniform01() {
        std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (++counter);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        x ^= x >> 31;
        return static_cast<double>(x >> 11) * 0x1.0p-53;
    }
};

}  // namespace

std::vector<Signature> sample_process(const ZWParams& p, int n, std::uint64_t seed, int count,
                                      double radius) {
    if (!p.admissible) throw DomainError("sample_process: parameters not admissible");
    if (radius <= 0.0) radius = 6.0 * n + 40.0;
    TruncatedLattice lat = TruncatedLattice::make(p, n, radius);
    BlockKernel K = cd_kernel_matrix(p, lat);
    const long long m = static_cast<long long>(lat.size());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K.values);
    // the window must carry the projection almost entirely
    double lost = 0.0;
    for (long long i = 0; i < m - n; ++i) lost += std::abs(es.eigenvalues()(i));
    for (long long i = m - n; i < m; ++i) lost += std::abs(1.0 - es.eigenvalues()(i));
    if (lost > 1e-6)
        throw DomainError("sample_process: window too small to carry the rank-N projection");
    Eigen::MatrixXd phi = es.eigenvectors().rightCols(n);  // orthonormal columns

    std::vector<Signature> out;
    out.reserve(static_cast<size_t>(count));
    CounterRng rng(seed);
    for (int c = 0; c < count; ++c) {
        Eigen::MatrixXd V = phi;
        std::vector<LatticePoint> conf;
        for (int step = n; step >= 1; --step) {
            Eigen::VectorXd prob(m);
            for (long long i = 0; i < m; ++i) prob(i) = V.row(i).squaredNorm() / step;
            double u = rng.uniform01(), acc = 0.0;
            long long pick = m - 1;
            for (long long i = 0; i < m; ++i) {
                acc += prob(i);
                if (u <= acc) { pick = i; break; }
            }
            conf.push_back(lat.points[static_cast<size_t>(pick)]);
            if (step == 1) break;
            // eliminate the direction that saw the picked point
            long long col;
            V.row(pick).cwiseAbs().maxCoeff(&col);
            Eigen::VectorXd vj = V.col(col);
            double pivot = V(pick, col);
            for (long long cc = 0; cc < V.cols(); ++cc) {
                if (cc == col) continue;
                V.col(cc) -= (V(pick, cc) / pivot) * vj;
            }
            // drop the used column and re-orthonormalize for stability
            V.block(0, col, m, V.cols() - col - 1) = V.rightCols(V.cols() - col - 1);
            V.conservativeResize(m, V.cols() - 1);
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
            V = qr.householderQ() * Eigen::MatrixXd::Identity(m, V.cols());
        }
        // the draw is the particle configuration; hand back its signature
        std::vector<LatticePoint> X;
        std::sort(conf.begin(), conf.end());
        for (long long d = -(n - 1); d <= n - 1; d += 2) {
            LatticePoint q{d, n};
            if (!std::binary_search(conf.begin(), conf.end(), q)) X.push_back(q);
        }
        for (const auto& q : conf)
            if (!q.is_inner()) X.push_back(q);
        out.push_back(meas::X_to_lambda(X, n));
    }
    return out;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<size_t>(order), 0.0);
    weights.assign(static_cast<size_t>(order), 0.0);
    for (int i = 0; i < order; ++i) {
        double t = std::cos(3.14159265358979323846 * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = t;
            for (int j = 2; j <= order; ++j) {
                double pj = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
                p0 = p1;
                p1 = pj;
            }
            dp = order * (t * p1 - p0) / (t * t - 1.0);
            double step = p1 / dp;
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        nodes[static_cast<size_t>(i)] = t;
        weights[static_cast<size_t>(i)] = 2.0 / ((1.0 - t * t) * dp * dp);
    }
}

double fredholm_det(const std::function<double(double, double)>& kernel, double a, double b,
                    int order) {
    std::vector<double> t, w;
    gauss_legendre(order, t, w);
    Eigen::MatrixXd M(order, order);
    std::vector<double> x(static_cast<size_t>(order)), rw(static_cast<size_t>(order));
    for (int i = 0; i < order; ++i) {
        x[static_cast<size_t>(i)] = 0.5 * (a + b) + 0.5 * (b - a) * t[static_cast<size_t>(i)];
        rw[static_cast<size_t>(i)] = std::sqrt(0.5 * (b - a) * w[static_cast<size_t>(i)]);
    }
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j)
            M(i, j) = (i == j ? 1.0 : 0.0) - rw[static_cast<size_t>(i)] * rw[static_cast<size_t>(j)] *
                                                kernel(x[static_cast<size_t>(i)], x[static_cast<size_t>(j)]);
    return M.determinant();
}

double fredholm_det_checked(const std::function<double(double, double)>& kernel, double a,
                            double b, int order, double tol) {
    double d1 = fredholm_det(kernel, a, b, order);
    double d2 = fredholm_det(kernel, a, b, 2 * order);
    if (std::abs(d1 - d2) > tol * std::max(1.0, std::abs(d2)))
        throw ConvergenceError("fredholm_det_checked: value did not settle under doubling");
    return d2;
}

double fredholm_det_halfline(const std::function<double(double, double)>& kernel, double s,
                             int order) {
    auto mapped = [&](double u, double v) {
        double tu = s + u / (1.0 - u), tv = s + v / (1.0 - v);
        double ju = 1.0 / ((1.0 - u) * (1.0 - u)), jv = 1.0 / ((1.0 - v) * (1.0 - v));
        return kernel(tu, tv) * std::sqrt(ju * jv);
    };
    return fredholm_det(mapped, 0.0, 1.0, order);
}

}  // namespace zw::dpp
