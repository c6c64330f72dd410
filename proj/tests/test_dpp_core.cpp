#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "oracles.hpp"
#include "zw/dpp_core.hpp"
#include "zw/rh_kernel.hpp"

using namespace zw::dpp;
using namespace zw::meas;
using oracles::Rng;

namespace {

ZWParams canonical() { return classify({0.3, 0.4}, {0.3, -0.4}, {0.2, 0.0}, {0.25, 0.0}); }
ZWParams degenerate_21() { return classify({2, 0}, {2.5, 0}, {1, 0}, {1.5, 0}, true); }

}  // namespace

TEST_CASE("resolvent seed has the two-component block shape") {
    auto p = canonical();
    auto lat = TruncatedLattice::make(p, 3, 12.0);
    auto L = build_L(p, lat);
    for (size_t i = 0; i < lat.size(); ++i) CHECK(L.values(i, i) == 0.0);
    CHECK((L.values + L.values.transpose()).norm() == 0.0);
    // like blocks vanish identically
    for (size_t i = 0; i < lat.size(); ++i)
        for (size_t j = 0; j < lat.size(); ++j)
            if (lat.points[i].is_inner() == lat.points[j].is_inner())
                CHECK(L.values(i, j) == 0.0);
}

TEST_CASE("degenerate parameters give finitely supported outer weight") {
    auto p = degenerate_21();
    auto lat = TruncatedLattice::make(p, 3, 15.0);
    CHECK(lat.tail_bound == 0.0);
    auto L = build_L(p, lat);
    // outer support is within [-(N-1)/2 - l, (N-1)/2 + k]
    for (size_t i = 0; i < lat.size(); ++i) {
        const auto& a = lat.points[i];
        if (a.is_inner()) continue;
        bool inside = a.value() >= -0.5 * 2 - 1.0 && a.value() <= 0.5 * 2 + 2.0;
        double rownorm = L.values.row(i).norm();
        if (inside)
            CHECK(rownorm > 0.0);
        else
            CHECK(rownorm == 0.0);
    }
}

TEST_CASE("resolvent identity on small cases") {
    // L = 0 gives K = 0
    TruncatedLattice lat = TruncatedLattice::make(canonical(), 3, 4.0);
    BlockKernel L0;
    L0.lattice = lat;
    L0.values = Eigen::MatrixXd::Zero(lat.size(), lat.size());
    CHECK(k_from_l(L0).values.norm() == 0.0);

    // single entry pair +-a: diagonal of K is a^2/(1+a^2)
    double a = 0.7;
    BlockKernel L1 = L0;
    L1.values(0, 1) = a;
    L1.values(1, 0) = -a;
    auto K1 = k_from_l(L1);
    CHECK(K1.values(0, 0) == doctest::Approx(a * a / (1 + a * a)));
    CHECK(K1.values(1, 1) == doctest::Approx(a * a / (1 + a * a)));
    CHECK(K1.values(0, 1) == doctest::Approx(a / (1 + a * a)));
}

TEST_CASE("total mass expansion over a six point toy lattice") {
    // sum over subsets of det L_X equals det(1 + L)
    Rng rng(3);
    int m = 6;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = rng.uniform(-0.8, 0.8);
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(m, m);
    L.topRightCorner(3, 3) = A;
    L.bottomLeftCorner(3, 3) = -A.transpose();
    double direct = (Eigen::MatrixXd::Identity(m, m) + L).determinant();
    double total = 0.0;
    for (int mask = 0; mask < (1 << m); ++mask) {
        std::vector<int> idx;
        for (int b = 0; b < m; ++b)
            if (mask & (1 << b)) idx.push_back(b);
        Eigen::MatrixXd minor(idx.size(), idx.size());
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j) minor(i, j) = L(idx[i], idx[j]);
        total += idx.empty() ? 1.0 : minor.determinant();
    }
    CHECK(std::abs(total - direct) < 1e-12 * std::abs(direct));
}

TEST_CASE("complementation is involutive on correlation determinants") {
    auto p = canonical();
    auto lat = TruncatedLattice::make(p, 3, 10.0);
    auto K = cd_kernel_matrix(p, lat);
    auto K_same = complement_kernel(K, {});
    CHECK((K_same.values - K.values).norm() == 0.0);

    std::vector<LatticePoint> Z;
    for (const auto& x : lat.points)
        if (x.is_inner()) Z.push_back(x);
    auto Kd = complement_kernel(K, Z);
    auto Kdd = complement_kernel(Kd, Z);
    // twice-swapped kernel shares all correlation determinants with the original
    Rng rng(7);
    for (int t = 0; t < 20; ++t) {
        std::vector<LatticePoint> pts;
        for (int j = 0; j < 3; ++j)
            pts.push_back(lat.points[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(lat.size()) - 1))]);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](auto& a, auto& b) { return a.doubled == b.doubled; }),
                  pts.end());
        CHECK(std::abs(correlation_rho(K, pts) - correlation_rho(Kdd, pts)) < 1e-12);
    }
}

TEST_CASE("epsilon sign pattern") {
    int n = 3;
    CHECK(epsilon_sign(lattice_point(n, 4)) == 1);   // just right of the bulk
    CHECK(epsilon_sign(lattice_point(n, 2)) == 1);   // rightmost inner
    CHECK(epsilon_sign(lattice_point(n, 0)) == -1);  // alternation inward
    CHECK(epsilon_sign(lattice_point(n, -2)) == 1);
    CHECK(epsilon_sign(lattice_point(n, -4)) == -1); // left outer, N odd
    int n2 = 4;
    CHECK(epsilon_sign(lattice_point(n2, -5)) == 1); // left outer, N even
    // matches the product definition
    for (long long d = -9; d <= 9; d += 2) {
        LatticePoint x{d, n2};
        double prod = 1.0;
        for (long long e = -(n2 - 1); e <= n2 - 1; e += 2) {
            if (e == d) continue;
            prod *= (0.5 * d - 0.5 * e);
        }
        CHECK(epsilon_sign(x) == (prod > 0 ? 1 : -1));
    }
}

TEST_CASE("kernel conjugation between the two computation routes") {
    // the resolvent kernel equals the sign-conjugated particle-hole swap of
    // the projection kernel
    auto p = canonical();
    for (int n : {3, 4}) {
        auto lat = TruncatedLattice::make(p, n, 25.0);
        auto K = k_from_l(build_L(p, lat));
        auto Kcd = cd_kernel_matrix(p, lat);
        std::vector<LatticePoint> Z;
        for (const auto& x : lat.points)
            if (x.is_inner()) Z.push_back(x);
        auto Kswap = complement_kernel(Kcd, Z);
        double worst = 0.0;
        for (size_t i = 0; i < lat.size(); ++i)
            for (size_t j = 0; j < lat.size(); ++j) {
                double want = epsilon_sign(lat.points[i]) * Kswap.values(i, j) *
                              epsilon_sign(lat.points[j]);
                worst = std::max(worst, std::abs(K.values(i, j) - want));
            }
        CHECK(worst < 1e-7 + lat.tail_bound);
    }
}

TEST_CASE("hermitian blocks of the resolvent kernel lie in the unit interval") {
    auto p = canonical();
    auto lat = TruncatedLattice::make(p, 3, 25.0);
    auto K = k_from_l(build_L(p, lat));
    CHECK(K.j_symmetry_defect() < 1e-10);
    std::vector<long long> in_idx, out_idx;
    for (size_t i = 0; i < lat.size(); ++i)
        (lat.points[i].is_inner() ? in_idx : out_idx).push_back(static_cast<long long>(i));
    auto block_eigs = [&](const std::vector<long long>& idx) {
        Eigen::MatrixXd B(idx.size(), idx.size());
        for (size_t i = 0; i < idx.size(); ++i)
            for (size_t j = 0; j < idx.size(); ++j) B(i, j) = K.values(idx[i], idx[j]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
        return std::make_pair(es.eigenvalues().minCoeff(), es.eigenvalues().maxCoeff());
    };
    auto [lo_in, hi_in] = block_eigs(in_idx);
    auto [lo_out, hi_out] = block_eigs(out_idx);
    CHECK(lo_in > -1e-9);
    CHECK(hi_in < 1.0 + 1e-9);
    CHECK(lo_out > -1e-9);
    CHECK(hi_out < 1.0 + 1e-9);
}

TEST_CASE("correlation determinants against exact enumeration") {
    auto p = degenerate_21();
    int n = 3;
    auto lat = TruncatedLattice::make(p, n, 8.0);
    auto K = k_from_l(build_L(p, lat));

    CHECK(brute_force_rho(p, n, {}).value == doctest::Approx(1.0));
    // a singleton beyond the support is impossible
    CHECK(brute_force_rho(p, n, {lattice_point(n, 10)}).value == 0.0);

    for (long long d = -6; d <= 8; d += 2) {
        auto x = lattice_point(n, d);
        double det1 = K.at(x, x);
        auto oracle = brute_force_rho(p, n, {x});
        CHECK(std::abs(det1 - oracle.value) < 1e-10);
        for (long long e = d + 2; e <= 8; e += 2) {
            auto y = lattice_point(n, e);
            double det2 = correlation_rho(K, {x, y});
            auto oracle2 = brute_force_rho(p, n, {x, y});
            CHECK(std::abs(det2 - oracle2.value) < 1e-10);
        }
    }
}

TEST_CASE("windowed enumeration matches the kernel at generic parameters") {
    auto p = canonical();
    int n = 2;
    auto lat = TruncatedLattice::make(p, n, 30.0);
    auto K = k_from_l(build_L(p, lat));
    auto x = lattice_point(n, 1);
    auto oracle = brute_force_rho(p, n, {x}, 40);
    CHECK(std::abs(K.at(x, x) - oracle.value) < 1e-5 + oracle.err + lat.tail_bound);
}

TEST_CASE("ensemble probabilities agree through the particle-hole involution") {
    // at integral parameters every configuration weight of the two-component
    // ensemble matches the signature measure exactly
    auto p = degenerate_21();
    int n = 3;
    auto lat = TruncatedLattice::make(p, n, 10.0);
    auto L = build_L(p, lat);
    double norm = (Eigen::MatrixXd::Identity(lat.size(), lat.size()) + L.values).determinant();
    for (const auto& lam : enumerate_support(2, 1, n)) {
        auto X = lambda_to_X(lam);
        Eigen::MatrixXd minor(X.size(), X.size());
        for (size_t i = 0; i < X.size(); ++i)
            for (size_t j = 0; j < X.size(); ++j)
                minor(i, j) = L.at(X[i], X[j]);
        double prob = (X.empty() ? 1.0 : minor.determinant()) / norm;
        double want = measure(p, lam).p_n;
        CHECK(std::abs(prob - want) < 1e-12 * std::max(1.0, want));
    }
}

TEST_CASE("determinant under doubling control") {
    auto kern = [](double a, double b) { return 0.4 * std::exp(-(a - b) * (a - b)); };
    CHECK(std::isfinite(fredholm_det_checked(kern, 0.0, 2.0, 24, 1e-8)));
    // an oscillatory kernel cannot settle at toy orders
    auto rough = [](double a, double b) { return std::sin(40.0 * (a + 1.0) * (b + 0.3)); };
    CHECK_THROWS_AS(fredholm_det_checked(rough, 0.0, 2.0, 4, 1e-12), zw::ConvergenceError);
}

TEST_CASE("sampler draws from the point mass in the frozen case") {
    auto p = classify({1, 0}, {1.5, 0}, {-1, 0}, {-0.5, 0}, true);
    auto draws = sample_process(p, 3, 42, 5, 30.0);
    REQUIRE(draws.size() == 5);
    for (const auto& lam : draws) CHECK(lam == Signature({1, 1, 1}));
}

TEST_CASE("sampler is reproducible for a fixed seed") {
    auto p = degenerate_21();
    auto a = sample_process(p, 3, 123, 10, 25.0);
    auto b = sample_process(p, 3, 123, 10, 25.0);
    CHECK(a == b);
    auto c = sample_process(p, 3, 124, 10, 25.0);
    CHECK(a != c);
}

TEST_CASE("empirical one-point function matches the kernel diagonal") {
    auto p = degenerate_21();
    int n = 3;
    auto lat = TruncatedLattice::make(p, n, 12.0);
    auto Kt = cd_kernel_matrix(p, lat);  // particle process kernel
    const int count = 20000;
    auto draws = sample_process(p, n, 2024, count, 12.0);
    std::map<long long, int> hits;
    for (const auto& lam : draws)
        for (const auto& x : lambda_to_L(lam)) hits[x.doubled]++;
    int checked = 0;
    for (const auto& x : lat.points) {
        double k = Kt.at(x, x);
        if (k < 0.02 || k > 0.98) continue;
        double phat = static_cast<double>(hits[x.doubled]) / count;
        double sigma = std::sqrt(k * (1.0 - k) / count);
        CHECK(std::abs(phat - k) < 3.5 * sigma);
        ++checked;
    }
    CHECK(checked >= 6);
}

TEST_CASE("sampler matches the kernel diagonal at generic parameters") {
    // size one keeps the window certification feasible
    auto p = canonical();
    int n = 1;
    auto lat = TruncatedLattice::make(p, n, 600.0);
    auto Kt = cd_kernel_matrix(p, lat);
    const int count = 4000;
    auto draws = sample_process(p, n, 99, count, 600.0);
    std::map<long long, int> hits;
    for (const auto& lam : draws) hits[2 * lam.parts[0]]++;
    int checked = 0;
    for (long long d = -8; d <= 8; d += 2) {
        auto x = lattice_point(n, d);
        double k = Kt.at(x, x);
        if (k < 0.004) continue;  // keep the normal approximation honest
        double phat = static_cast<double>(hits[d]) / count;
        double sigma = std::sqrt(k * (1.0 - k) / count);
        CHECK(std::abs(phat - k) < 4.5 * sigma);
        ++checked;
    }
    CHECK(checked >= 5);
}

TEST_CASE("nystrom determinant basics") {
    // zero kernel
    CHECK(fredholm_det([](double, double) { return 0.0; }, 0.0, 1.0, 24) == doctest::Approx(1.0));
    // rank one: det = 1 - int phi^2
    auto phi = [](double t) { return std::cos(1.3 * t); };
    double integral = 0.0;
    {
        std::vector<double> x, w;
        gauss_legendre(64, x, w);
        for (int i = 0; i < 64; ++i) {
            double t = 0.5 + 0.5 * x[static_cast<size_t>(i)];
            integral += 0.5 * w[static_cast<size_t>(i)] * phi(t) * phi(t);
        }
    }
    double det = fredholm_det([&](double a, double b) { return phi(a) * phi(b); }, 0.0, 1.0, 48);
    CHECK(det == doctest::Approx(1.0 - integral).epsilon(1e-10));
    // doubling the order leaves a smooth-kernel determinant unchanged
    auto kern = [](double a, double b) { return 0.4 * std::exp(-(a - b) * (a - b)); };
    double d1 = fredholm_det(kern, 0.0, 2.0, 32);
    double d2 = fredholm_det(kern, 0.0, 2.0, 64);
    CHECK(std::abs(d1 - d2) < 1e-10);
}
