#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include <Eigen/Dense>

#include "zw/orthopoly.hpp"

using namespace zw::ortho;
using namespace zw::meas;
using oracles::Rng;

namespace {

ZWParams canonical() { return classify({0.3, 0.4}, {0.3, -0.4}, {0.2, 0.0}, {0.25, 0.0}); }

double rel(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace

TEST_CASE("low degree values match hand expansions") {
    ALParams al{{1.7, 0.3}, {1.7, -0.3}, {0.4, 0.0}, {0.9, 0.0}};
    // degree zero is the constant one
    CHECK(std::abs(al_value(0, al, {2.3, 0.0}) - cplx(1.0, 0.0)) < 1e-14);
    // degree one: t + v' - (u+v')(u'+v')/frakS
    cplx t(1.25, 0.0);
    cplx want = t + al.vp - (al.u + al.vp) * (al.up + al.vp) / al.frakS();
    CHECK(std::abs(al_value(1, al, t) - want) < 1e-13);
}

TEST_CASE("polynomials are monic") {
    ALParams al{{2.1, 0.0}, {2.6, 0.0}, {0.2, 0.0}, {0.45, 0.0}};
    for (int m = 1; m <= 3; ++m) {
        // finite differences of order m recover m! times the leading coefficient
        double acc = 0.0;
        for (int j = 0; j <= m; ++j) {
            double sign = (m - j) % 2 ? -1.0 : 1.0;
            double binom = std::exp(std::lgamma(m + 1.0) - std::lgamma(j + 1.0) - std::lgamma(m - j + 1.0));
            acc += sign * binom * al_value(m, al, {static_cast<double>(j), 0.0}).real();
        }
        CHECK(std::abs(acc - std::exp(std::lgamma(m + 1.0))) < 1e-9 * std::exp(std::lgamma(m + 1.0)));
    }
}

TEST_CASE("closed-form norm matches the lattice sum") {
    auto p = canonical();
    int n = 3;
    ALParams al = ALParams::from(p, n);
    for (int m = 0; m <= 1; ++m) {
        cplx closed = al_norm(m, al);
        double acc = 0.0;
        for (long long t = -800; t <= 800; ++t) {
            double pv = al_value(m, al, {static_cast<double>(t), 0.0}).real();
            acc += pv * pv * al_weight(al, static_cast<double>(t));
        }
        CHECK(std::abs(acc - closed.real()) < 1e-8 * std::abs(closed.real()));
        CHECK(std::abs(closed.imag()) < 1e-10 * std::abs(closed));
    }
}

TEST_CASE("gram-schmidt reproduces the closed-form system on a window") {
    // parameters with a large exponent sum so the window sums converge fast
    ALParams al{{4.1, 0.7}, {4.1, -0.7}, {1.8, 0.0}, {2.0, 0.0}};
    REQUIRE(std::abs(al.frakS().real() - 12.0) < 1e-12);
    std::vector<double> nodes, wt;
    for (long long t = -400; t <= 400; ++t) {
        nodes.push_back(static_cast<double>(t));
        wt.push_back(al_weight(al, static_cast<double>(t)));
    }
    auto sys = finite_orthogonalize(nodes, wt, 3);
    for (int m = 0; m <= 3; ++m) {
        for (double t : {-4.0, -1.0, 0.0, 2.0, 5.0}) {
            double closed = al_value(m, al, {t, 0.0}).real();
            CHECK(std::abs(sys.eval(m, t) - closed) < 1e-8 * std::max(1.0, std::abs(closed)));
        }
    }
    CHECK(sys.ortho_residual() < 1e-10);
}

TEST_CASE("gram-schmidt on a three point uniform weight") {
    auto sys = finite_orthogonalize({0.0, 1.0, 2.0}, {1.0, 1.0, 1.0}, 1);
    // p1(x) = x - 1
    CHECK(sys.eval(1, 0.0) == doctest::Approx(-1.0));
    CHECK(sys.eval(1, 1.0) == doctest::Approx(0.0));
    CHECK(sys.eval(1, 2.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(finite_orthogonalize({0.0, 1.0}, {1.0, 0.0}, 1), zw::DomainError);
}

TEST_CASE("difference equation of hypergeometric type") {
    Rng rng(51);
    for (int trial = 0; trial < 30; ++trial) {
        // admissible-shaped parameters: principal or complementary pairs
        double re = rng.uniform(-0.3, 0.8), im = rng.uniform(0.1, 0.9);
        int n = rng.uniform_int(6, 12);
        auto p = classify({re, im}, {re, -im}, {rng.uniform(0.05, 0.45), 0.0},
                          {rng.uniform(0.5, 0.95), 0.0});
        ALParams al = ALParams::from(p, n);
        cplx fS = al.frakS();
        int m = rng.uniform_int(0, 5);
        cplx gamma_m = static_cast<double>(m) * (static_cast<double>(m) - 1.0 - fS);
        for (int pt = 0; pt < 20; ++pt) {
            double t = rng.uniform_int(-10, 10);
            cplx pm = al_value(m, al, {t, 0.0});
            cplx pp = al_value(m, al, {t + 1.0, 0.0});
            cplx pmm = al_value(m, al, {t - 1.0, 0.0});
            cplx sigma_t = -(t + al.v) * (t + al.vp);
            cplx tau_t = fS * t + al.v * al.vp - al.u * al.up;
            cplx resid = sigma_t * (pp - 2.0 * pm + pmm) + tau_t * (pp - pm) + gamma_m * pm;
            double scale = std::max({std::abs(pm), std::abs(pp), std::abs(pmm), 1.0});
            CHECK(std::abs(resid) < 1e-8 * scale * std::max(1.0, std::abs(sigma_t)));
        }
    }
}

TEST_CASE("rank sum equals the two-point form off the diagonal") {
    auto p = canonical();
    int n = 4;
    ALParams al = ALParams::from(p, n);
    Rng rng(61);
    for (int trial = 0; trial < 25; ++trial) {
        long long dx = 2 * rng.uniform_int(-8, 8) + (n - 1) % 2;
        long long dy = 2 * rng.uniform_int(-8, 8) + (n - 1) % 2;
        if (dx == dy) continue;
        auto x = lattice_point(n, 2 * rng.uniform_int(-8, 8) + ((n - 1) & 1));
        auto y = lattice_point(n, 2 * rng.uniform_int(-8, 8) + ((n - 1) & 1));
        if (x == y) continue;
        double two_point = cd_kernel_tilde(p, n, x, y);
        double tx = x.value() + 0.5 * (n - 1.0), ty = y.value() + 0.5 * (n - 1.0);
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            acc += (al_value(m, al, {tx, 0.0}) * al_value(m, al, {ty, 0.0}) / al_norm(m, al)).real();
        }
        acc *= std::sqrt(weight_f(p, n, x) * weight_f(p, n, y));
        CHECK(std::abs(two_point - acc) < 1e-10 * std::max(1.0, std::abs(acc)));
    }
}

TEST_CASE("projection identities of the rank-N kernel") {
    auto p = canonical();
    int n = 3;
    long long radius = 220;
    // trace over a window approaches N
    double trace = 0.0;
    for (long long d = -2 * radius; d <= 2 * radius; d += 2) {
        auto x = lattice_point(n, d);
        trace += cd_kernel_tilde(p, n, x, x);
    }
    CHECK(std::abs(trace - n) < 1e-4);  // slow polynomial tail

    // idempotence at a fixed row
    auto x0 = lattice_point(n, 2);
    double acc = 0.0;
    for (long long d = -2 * radius; d <= 2 * radius; d += 2) {
        auto y = lattice_point(n, d);
        double v = cd_kernel_tilde(p, n, x0, y);
        acc += v * v;  // kernel symmetric
    }
    CHECK(std::abs(acc - cd_kernel_tilde(p, n, x0, x0)) < 1e-6);
}

TEST_CASE("companion form continues the kernel through sigma near zero") {
    // both expressions agree at canonical parameters
    auto p = canonical();
    int n = 3;
    auto x = lattice_point(n, 4);
    auto y = lattice_point(n, -2);
    cplx hnm1 = norm_hNm1(p, n);
    cplx top1 = poly_pN(p, n, x.value()) * poly_pNm1(p, n, y.value()) -
                poly_pNm1(p, n, x.value()) * poly_pN(p, n, y.value());
    cplx top2 = poly_pN_tilde(p, n, x.value()) * poly_pNm1(p, n, y.value()) -
                poly_pNm1(p, n, x.value()) * poly_pN_tilde(p, n, y.value());
    double root = std::sqrt(weight_f(p, n, x) * weight_f(p, n, y));
    double k1 = (top1 / (hnm1 * (x.value() - y.value()))).real() * root;
    double k2 = (top2 / (hnm1 * (x.value() - y.value()))).real() * root;
    CHECK(rel(k1, k2) < 1e-10);

    // a nearly balanced admissible quadruple, Sigma = 1e-6
    auto p0 = classify({0.3, 0.4}, {0.3, -0.4}, {-0.45, 0.0}, {-0.15 + 1e-6, 0.0});
    REQUIRE(p0.admissible);
    REQUIRE(std::abs(p0.sigma()) < 1e-4);
    auto k00 = cd_kernel_tilde(p0, 3, lattice_point(3, 4), lattice_point(3, -2));
    CHECK(std::isfinite(k00));
}

TEST_CASE("domain gates") {
    // moment condition: frakS = 2.2 supports degrees up to 2 only
    ALParams thin{{0.4, 0.0}, {0.5, 0.0}, {0.6, 0.0}, {0.7, 0.0}};
    CHECK_THROWS_AS(askey_lesky(3, thin, {0.0, 0.0}), zw::DomainError);
    CHECK_THROWS_AS(jacobi_cd_kernel(2, -1.5, 0.5, 0.1, 0.2), zw::DomainError);
}

TEST_CASE("jacobi kernel basics") {
    // rank one: K(x,y) = sqrt(w(x)w(y))/h0
    double alpha = 0.5, beta = 1.5;
    double h0 = std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                         std::lgamma(alpha + beta + 2.0));
    for (double x : {-0.3, 0.1, 0.4}) {
        for (double y : {-0.2, 0.25}) {
            double want = std::sqrt(std::pow(0.5 - x, alpha) * std::pow(0.5 + x, beta) *
                                    std::pow(0.5 - y, alpha) * std::pow(0.5 + y, beta)) / h0;
            CHECK(rel(jacobi_cd_kernel(1, alpha, beta, x, y), want) < 1e-12);
        }
    }
    CHECK(jacobi_cd_kernel(2, alpha, beta, 0.7, 0.1) == 0.0);
}

TEST_CASE("jacobi kernel reproduces itself under quadrature") {
    // Gauss quadrature for the Jacobi weight itself (Golub-Welsch on the
    // mapped recurrence) integrates the product kernel exactly
    int m = 3;
    double alpha = 0.5, beta = 1.5, ab = alpha + beta;
    int q = 8;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(q, q);
    for (int j = 0; j < q; ++j) {
        double aj = (j == 0) ? (beta - alpha) / (ab + 2.0)
                             : (beta * beta - alpha * alpha) / ((2.0 * j + ab) * (2.0 * j + ab + 2.0));
        J(j, j) = 0.5 * aj;
        if (j > 0) {
            double bj = (j == 1) ? 4.0 * (alpha + 1.0) * (beta + 1.0) /
                                       ((ab + 2.0) * (ab + 2.0) * (ab + 3.0))
                                 : 4.0 * j * (j + alpha) * (j + beta) * (j + ab) /
                                       ((2.0 * j + ab) * (2.0 * j + ab) * (2.0 * j + ab + 1.0) *
                                        (2.0 * j + ab - 1.0));
            J(j, j - 1) = J(j - 1, j) = std::sqrt(0.25 * bj);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    double h0 = std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                         std::lgamma(ab + 2.0));
    auto wfun = [&](double t) { return std::pow(0.5 - t, alpha) * std::pow(0.5 + t, beta); };
    for (double x : {-0.2, 0.3}) {
        for (double y : {-0.35, 0.15}) {
            double acc = 0.0;
            for (int i = 0; i < q; ++i) {
                double ti = es.eigenvalues()(i);
                double wi = h0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
                acc += wi * jacobi_cd_kernel(m, alpha, beta, x, ti) *
                       jacobi_cd_kernel(m, alpha, beta, ti, y) / wfun(ti);
            }
            CHECK(rel(acc, jacobi_cd_kernel(m, alpha, beta, x, y)) < 1e-10);
        }
    }
}

TEST_CASE("hahn system is orthogonal and approaches the jacobi kernel") {
    long long k = 2, l = 1;
    double zp = 2.5, wp = 1.5;
    {
        int n = 8;
        auto nodes = hahn_nodes(k, l, n);
        std::vector<double> wt;
        for (double t : nodes) wt.push_back(hahn_weight(k, l, n, zp, wp, t));
        auto sys = finite_orthogonalize(nodes, wt, static_cast<int>(k + l));
        CHECK(sys.ortho_residual() < 1e-10);
    }
    // scaled lattice kernel vs the continuous one, improving in M
    double alpha = zp - static_cast<double>(k), beta = wp - static_cast<double>(l);
    int m = static_cast<int>(k + l);
    double x = 0.2, y = -0.1;
    double prev = 1e9;
    for (int M : {50, 100, 200}) {
        auto xm = nearest_lattice_point(M, x * M);
        auto ym = nearest_lattice_point(M, y * M);
        double lat = M * hahn_cd_kernel(k, l, M, zp, wp, xm.value(), ym.value());
        double lim = jacobi_cd_kernel(m, alpha, beta, x, y);
        double err = std::abs(lat - lim);
        CHECK(err < prev * 1.2);
        prev = err;
        if (M == 200) CHECK(err < 2e-2 * (1.0 + std::abs(lim)));
    }
}

TEST_CASE("dual systems on a shared node set") {
    // two weights with u * v = 1/prod (x_k - x_i)^2 produce sign-twisted
    // mirror systems
    Rng rng(91);
    const int M = 9;  // degrees 0..9 on 10 points
    std::vector<double> nodes;
    double t = 0.0;
    for (int i = 0; i <= M; ++i) {
        t += rng.uniform(0.5, 1.4);
        nodes.push_back(t);
    }
    std::vector<double> u, v;
    for (int kk = 0; kk <= M; ++kk) {
        double prod = 1.0;
        for (int i = 0; i <= M; ++i)
            if (i != kk) prod *= (nodes[static_cast<size_t>(kk)] - nodes[static_cast<size_t>(i)]);
        double uv = rng.uniform(0.2, 2.0);
        u.push_back(uv);
        v.push_back(1.0 / (uv * prod * prod));
    }
    auto su = finite_orthogonalize(nodes, u, M);
    auto sv = finite_orthogonalize(nodes, v, M);
    for (int i = 0; i <= M; ++i) {
        // monic normalization: h^u_i * h^v_{M-i} = 1
        CHECK(std::abs(su.norms[static_cast<size_t>(i)] * sv.norms[static_cast<size_t>(M - i)] - 1.0) < 1e-9);
        for (int kk = 0; kk <= M; ++kk) {
            double sign = 1.0;
            for (int j = 0; j <= M; ++j)
                if (j != kk && nodes[static_cast<size_t>(kk)] < nodes[static_cast<size_t>(j)]) sign = -sign;
            double lhs = su.values[static_cast<size_t>(i)][static_cast<size_t>(kk)] *
                         std::sqrt(u[static_cast<size_t>(kk)]);
            double rhs = sign * su.norms[static_cast<size_t>(i)] *
                         sv.values[static_cast<size_t>(M - i)][static_cast<size_t>(kk)] *
                         std::sqrt(v[static_cast<size_t>(kk)]);
            CHECK(std::abs(lhs - rhs) < 1e-9 * std::max(1.0, std::abs(lhs)));
        }
    }
}
