#include "zw/verify.hpp"

#include <cmath>
#include <complex>

#include "zw/rh_kernel.hpp"
#include "zw/scaling_limit.hpp"
#include "zw/specfun.hpp"

namespace zw::verify {

namespace sf = zw::specfun;
using cplx = std::complex<double>;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Rng {
    std::uint64_t state;
    explicit Rng(std::uint64_t seed) : state(seed) {}
    std::uint64_t next() {
        std::uint64_t x = (state += 0x9e3779b97f4a7c15ull);
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * (static_cast<double>(next() >> 11) * 0x1.0p-53);
    }
    int uniform_int(int lo, int hi) {
        return lo + static_cast<int>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }
};

double rel(cplx got, cplx want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

CheckResult finish(std::string name, double residual, double tol) {
    CheckResult r;
    r.name = std::move(name);
    r.residual = residual;
    r.tol = tol;
    r.pass = residual <= tol && std::isfinite(residual);
    return r;
}

}  // namespace

std::vector<CheckResult> identity_suite(std::uint64_t seed, int draws) {
    std::vector<CheckResult> out;

    {  // hypergeometric differential equation in the series region
        Rng rng(seed + 1);
        double worst = 0.0;
        for (int i = 0; i < draws; ++i) {
            cplx a(rng.uniform(-4, 4), rng.uniform(-2, 2));
            cplx b(rng.uniform(-4, 4), rng.uniform(-2, 2));
            cplx c(rng.uniform(0.3, 4), rng.uniform(-2, 2));
            double u = rng.uniform(-0.5, 0.5);
            const double h = 1e-5;
            cplx f0 = sf::hyp2f1(a, b, c, {u, 0});
            cplx fp = sf::hyp2f1(a, b, c, {u + h, 0});
            cplx fm = sf::hyp2f1(a, b, c, {u - h, 0});
            cplx resid = u * (1.0 - u) * (fp - 2.0 * f0 + fm) / (h * h) +
                         (c - (a + b + 1.0) * u) * (fp - fm) / (2.0 * h) - a * b * f0;
            worst = std::max(worst, std::abs(resid) / (1.0 + std::abs(f0)));
        }
        out.push_back(finish("gauss-ode", worst, 1e-5));
    }

    {  // two-term transformation with a terminating upper index
        Rng rng(seed + 2);
        double worst = 0.0;
        for (int i = 0; i < draws; ++i) {
            cplx a(-rng.uniform_int(0, 8), 0);
            cplx b(rng.uniform(0.2, 2.0), 0), c(rng.uniform(0.2, 2.0), 0);
            cplx e(rng.uniform(2.5, 5.0), 0), f(rng.uniform(2.5, 5.0), 0);
            cplx s = e + f - a - b - c;
            cplx lhs = sf::hyp3f2(a, b, c, e, f);
            cplx pref = std::exp(sf::log_gamma(e) + sf::log_gamma(s) -
                                 sf::log_gamma(e + f - b - c) - sf::log_gamma(e - a));
            cplx rhs = pref * sf::hyp3f2(a, f - b, f - c, e + f - b - c, f);
            worst = std::max(worst, rel(lhs, rhs));
        }
        out.push_back(finish("thomae-transform", worst, 1e-9));
    }

    {  // contiguity relation on terminating instances
        Rng rng(seed + 3);
        double worst = 0.0;
        for (int i = 0; i < draws; ++i) {
            cplx a(-rng.uniform_int(1, 7), 0);
            cplx b(rng.uniform(0.2, 2.0), rng.uniform(-0.5, 0.5));
            cplx c(rng.uniform(0.2, 2.0), rng.uniform(-0.5, 0.5));
            cplx e(rng.uniform(1.5, 4.0), 0), f(rng.uniform(1.5, 4.0), 0);
            cplx lhs = sf::hyp3f2(a, b, c, e, f);
            cplx rhs = sf::hyp3f2(a, b, c, e + 1.0, f) +
                       a * b * c / (e * (e + 1.0) * f) *
                           sf::hyp3f2(a + 1.0, b + 1.0, c + 1.0, e + 2.0, f + 1.0);
            worst = std::max(worst, rel(lhs, rhs));
        }
        out.push_back(finish("contiguity", worst, 1e-9));
    }

    {  // four-term partial fraction identity for sines
        Rng rng(seed + 4);
        auto sp = [](double t) { return std::sin(kPi * t); };
        double worst = 0.0;
        int used = 0;
        for (int i = 0; used < draws && i < 20 * draws; ++i) {
            double y = rng.uniform(-3, 3), z = rng.uniform(-2, 2), zp = rng.uniform(-2, 2);
            double w = rng.uniform(-2, 2), wp = rng.uniform(-2, 2);
            auto off = [](double t) { return std::abs(t - std::round(t)) > 0.08; };
            if (!(off(y - z) && off(y - zp) && off(y + w) && off(y + wp) && off(z - zp) &&
                  off(w - wp) && off(y)))
                continue;
            ++used;
            double lhs = sp(y) * sp(z + w) * sp(zp + w) * sp(z + wp) * sp(zp + wp) /
                         (sp(y - z) * sp(y - zp) * sp(y + w) * sp(y + wp));
            double rhs = sp(zp + w) * sp(zp + wp) * sp(z) / (sp(z - zp) * sp(y - z)) +
                         sp(z + w) * sp(z + wp) * sp(zp) / (sp(zp - z) * sp(y - zp)) +
                         sp(z + wp) * sp(zp + wp) * sp(w) / (sp(w - wp) * sp(y + w)) +
                         sp(z + w) * sp(zp + w) * sp(wp) / (sp(wp - w) * sp(y + wp));
            worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
        }
        out.push_back(finish("sine-partial-fraction", worst, 1e-10));
    }

    return out;
}

std::vector<CheckResult> symmetry_suite(const meas::ZWParams& p, int n) {
    std::vector<CheckResult> out;

    {  // reflection table of the limit solutions
        auto ps = meas::classify(p.w, p.wp, p.z, p.zp);
        double worst = 0.0;
        for (double x : {0.8, 1.4, 2.2, -0.9, -1.7}) {
            auto a = lim::limit_rh_out(p, cplx(x, 0.0), false);
            auto b = lim::limit_rh_out(ps, cplx(-x, 0.0), false);
            worst = std::max({worst, rel(a.R, b.R), rel(a.S, -b.S)});
        }
        for (double x : {-0.35, -0.1, 0.05, 0.25, 0.4}) {
            auto a = lim::limit_rh_in(p, cplx(x, 0.0), false);
            auto b = lim::limit_rh_in(ps, cplx(-x, 0.0), false);
            worst = std::max({worst, rel(a.R, b.R), rel(a.S, -b.S)});
        }
        out.push_back(finish("reflection-table", worst, 1e-9));
    }

    {  // invariance under swapping within a parameter pair
        auto pz = meas::classify(p.zp, p.z, p.w, p.wp);
        auto pw = meas::classify(p.z, p.zp, p.wp, p.w);
        double worst = 0.0;
        for (double x : {0.7, 1.5}) {
            auto a = lim::limit_rh_out(p, cplx(x, 0.0));
            for (const auto& q : {pz, pw}) {
                auto b = lim::limit_rh_out(q, cplx(x, 0.0));
                worst = std::max({worst, rel(a.R, b.R), rel(a.S, b.S)});
            }
        }
        for (double x : {-0.2, 0.3}) {
            auto a = lim::limit_rh_in(p, cplx(x, 0.0));
            for (const auto& q : {pz, pw}) {
                auto b = lim::limit_rh_in(q, cplx(x, 0.0));
                worst = std::max({worst, rel(a.R, b.R), rel(a.S, b.S)});
            }
        }
        out.push_back(finish("pair-swap-invariance", worst, 1e-9));
    }

    {  // block symmetry of the finite-size kernel
        double worst = 0.0;
        for (long long dx = -8; dx <= 8; dx += 2) {
            for (long long dy = dx + 2; dy <= 8; dy += 2) {
                long long px = dx + ((n - 1) & 1LL), py = dy + ((n - 1) & 1LL);
                auto x = meas::lattice_point(n, px), y = meas::lattice_point(n, py);
                double kxy = rh::kernel_KN(p, n, x, y);
                double kyx = rh::kernel_KN(p, n, y, x);
                double sign = (x.is_inner() == y.is_inner()) ? 1.0 : -1.0;
                worst = std::max(worst, std::abs(kxy - sign * kyx) / (1.0 + std::abs(kxy)));
            }
        }
        out.push_back(finish("finite-kernel-block-symmetry", worst, 1e-10));
    }

    {  // block symmetry of the limit kernel
        double worst = 0.0;
        std::vector<double> pts = {-1.8, -0.8, -0.3, 0.1, 0.4, 0.9, 1.7};
        for (size_t i = 0; i < pts.size(); ++i)
            for (size_t j = i + 1; j < pts.size(); ++j) {
                double kxy = lim::kernel_K(p, pts[i], pts[j]);
                double kyx = lim::kernel_K(p, pts[j], pts[i]);
                double sign = ((std::abs(pts[i]) < 0.5) == (std::abs(pts[j]) < 0.5)) ? 1.0 : -1.0;
                worst = std::max(worst, std::abs(kxy - sign * kyx) / (1.0 + std::abs(kxy)));
            }
        out.push_back(finish("limit-kernel-block-symmetry", worst, 1e-9));
    }

    {  // realness of the limit functions
        double worst = 0.0;
        for (double x : {0.7, 1.5, -2.0}) {
            auto o = lim::limit_rh_out(p, cplx(x, 0.0));
            worst = std::max({worst, std::abs(o.R.imag()) / (1.0 + std::abs(o.R)),
                              std::abs(o.S.imag()) / (1.0 + std::abs(o.S))});
        }
        for (double x : {-0.4, 0.0, 0.3}) {
            auto i = lim::limit_rh_in(p, cplx(x, 0.0));
            worst = std::max({worst, std::abs(i.R.imag()) / (1.0 + std::abs(i.R)),
                              std::abs(i.S.imag()) / (1.0 + std::abs(i.S))});
        }
        out.push_back(finish("limit-realness", worst, 1e-10));
    }

    return out;
}

std::vector<CheckResult> run_all(const meas::ZWParams& p, int n, std::uint64_t seed) {
    auto out = identity_suite(seed, 100);
    auto sym = symmetry_suite(p, n);
    out.insert(out.end(), sym.begin(), sym.end());

    {  // measure normalization over the degenerate support or a window
        double resid;
        if (p.class_zz.cls == meas::PairClass::Degenerate &&
            p.class_ww.cls == meas::PairClass::Degenerate) {
            double total = 0.0;
            for (const auto& lam : meas::enumerate_support(p.class_zz.m, p.class_ww.m, n))
                total += meas::measure(p, lam).p_n;
            resid = std::abs(total - 1.0);
            out.push_back(finish("measure-normalization", resid, 1e-10));
        } else {
            double total = 0.0;
            for (const auto& lam : meas::enumerate_box(-24, 24, std::min(n, 2)))
                total += meas::measure(p, lam).p_n;
            resid = std::abs(total - 1.0);
            out.push_back(finish("measure-normalization-window", resid, 2e-2));
        }
    }

    {  // residue relations of the inner solutions at live outer poles
        double c = 0.5 * (n + 1);
        double worst = 0.0;
        int live = 0;
        for (int j = 0; j < 3; ++j)
            for (double side : {1.0, -1.0}) {
                double a = side * (c + j);
                double po = rh::psi_out(p, n, a);
                if (po == 0.0) continue;
                ++live;
                auto res = [&](auto f) {
                    auto est = [&](double d) {
                        return 0.5 * (f(cplx(a + d, 0.0)) * cplx(d, 0.0) +
                                      f(cplx(a - d, 0.0)) * cplx(-d, 0.0));
                    };
                    cplx e1 = est(1e-3), e2 = est(5e-4);
                    return (4.0 * e2 - e1) / 3.0;
                };
                cplx resR = res([&](cplx zt) { return rh::rh_in(p, n, zt).R; });
                cplx resS = res([&](cplx zt) { return rh::rh_in(p, n, zt).S; });
                auto o = rh::rh_out(p, n, cplx(a, 0.0));
                worst = std::max(worst, std::abs(resR - po * o.S) /
                                            std::max(1e-300, std::abs(po * o.S)));
                worst = std::max(worst, std::abs(resS - po * o.R) /
                                            std::max(1e-300, std::abs(po * o.R)));
            }
        if (live > 0) out.push_back(finish("residue-relations", worst, 1e-7));
    }

    {  // coherency at a small window
        meas::Signature nu(std::vector<long long>(static_cast<size_t>(n - 1), 0));
        out.push_back(finish("coherency", meas::coherency_residual(p, n, nu, 60), 1e-5));
    }

    return out;
}

}  // namespace zw::verify
