#include "zw/scaling_limit.hpp"

#include <algorithm>
#include <cmath>

#include "zw/rh_kernel.hpp"
#include "zw/specfun.hpp"

namespace zw::lim {

namespace sf = zw::specfun;
using meas::ZWParams;

namespace {

constexpr double kPi = 3.14159265358979323846;

// exact zeros at the integers
double sinpi(double x) {
    double r = x - std::round(x);
    if (r == 0.0) return 0.0;
    double s = std::sin(kPi * r);
    return (static_cast<long long>(std::llround(x - r)) % 2 == 0) ? s : -s;
}

cplx csinpi(cplx v) {
    if (v.imag() == 0.0) return {sinpi(v.real()), 0.0};
    return std::sin(kPi * v);
}

ZWParams swapped(const ZWParams& p) { return meas::classify(p.w, p.wp, p.z, p.zp); }

bool near_int(cplx v, double tol) {
    return std::abs(v.imag()) <= tol && std::abs(v.real() - std::round(v.real())) <= tol;
}

}  // namespace

void OmegaPoint::validate() const {
    auto ordered = [](const std::vector<double>& v) {
        for (size_t i = 0; i < v.size(); ++i) {
            if (v[i] < 0.0) return false;
            if (i > 0 && v[i] > v[i - 1]) return false;
        }
        return true;
    };
    if (!ordered(alpha_plus) || !ordered(beta_plus) || !ordered(alpha_minus) ||
        !ordered(beta_minus))
        throw DomainError("OmegaPoint: rows must be nonincreasing and nonnegative");
    double b1p = beta_plus.empty() ? 0.0 : beta_plus.front();
    double b1m = beta_minus.empty() ? 0.0 : beta_minus.front();
    if (b1p + b1m > 1.0 + 1e-14)
        throw DomainError("OmegaPoint: leading beta coordinates exceed one");
    if (gamma_plus() < -1e-14 || gamma_minus() < -1e-14)
        throw DomainError("OmegaPoint: row sums exceed the mass parameters");
}

double OmegaPoint::gamma_plus() const {
    double s = delta_plus;
    for (double v : alpha_plus) s -= v;
    for (double v : beta_plus) s -= v;
    return s;
}

double OmegaPoint::gamma_minus() const {
    double s = delta_minus;
    for (double v : alpha_minus) s -= v;
    for (double v : beta_minus) s -= v;
    return s;
}

std::vector<double> iota(const OmegaPoint& om) {
    om.validate();
    std::vector<double> conf;
    for (double a : om.alpha_plus)
        if (a > 0.0) conf.push_back(a + 0.5);
    for (double b : om.beta_plus)
        if (b > 0.0 && b < 1.0) conf.push_back(0.5 - b);
    for (double a : om.alpha_minus)
        if (a > 0.0) conf.push_back(-a - 0.5);
    for (double b : om.beta_minus)
        if (b > 0.0 && b < 1.0) conf.push_back(-0.5 + b);
    std::sort(conf.begin(), conf.end());
    return conf;
}

double limit_psi_out(const ZWParams& p, double x) {
    if (std::abs(x) <= 0.5) throw DomainError("limit_psi_out: point not in the outer region");
    cplx val;
    if (x > 0.5) {
        cplx C = csinpi(p.z) * csinpi(p.zp) / (kPi * kPi);
        val = C * std::pow(x - 0.5, -(p.z + p.zp)) * std::pow(x + 0.5, -(p.w + p.wp));
    } else {
        cplx C = csinpi(p.w) * csinpi(p.wp) / (kPi * kPi);
        val = C * std::pow(-x - 0.5, -(p.w + p.wp)) * std::pow(-x + 0.5, -(p.z + p.zp));
    }
    if (std::abs(val.imag()) > 1e-10 * (1.0 + std::abs(val)))
        throw DomainError("limit_psi_out: value is not real");
    return val.real();
}

double limit_psi_in(const ZWParams& p, double x) {
    if (std::abs(x) >= 0.5) throw DomainError("limit_psi_in: point not in the inner region");
    cplx val = std::pow(0.5 - x, p.z + p.zp) * std::pow(0.5 + x, p.w + p.wp);
    if (std::abs(val.imag()) > 1e-10 * (1.0 + std::abs(val)))
        throw DomainError("limit_psi_in: value is not real");
    return val.real();
}

namespace {

RHPair rh_out_direct(const ZWParams& p, cplx x) {
    cplx sig = p.sigma();
    cplx u = 1.0 / (0.5 - x);
    cplx ratio = (x + 0.5) / (x - 0.5);
    RHPair out;
    out.R = std::pow(ratio, p.wp) * sf::hyp2f1(p.z + p.wp, p.zp + p.wp, sig, u);
    auto pref = sf::gamma_ratio({p.z + p.w + 1.0, p.z + p.wp + 1.0, p.zp + p.w + 1.0,
                                 p.zp + p.wp + 1.0},
                                {sig + 1.0, sig + 2.0})
                    .value();
    out.S = pref / (x - 0.5) * std::pow(ratio, p.wp) *
            sf::hyp2f1(p.z + p.wp + 1.0, p.zp + p.wp + 1.0, sig + 2.0, u);
    return out;
}

cplx rh_in_term(const ZWParams& p, cplx x, cplx a, cplx b, bool for_R) {
    cplx sig = p.sigma();
    cplx powers = std::pow(0.5 + x, -p.w) * std::pow(0.5 - x, -b);
    sf::SignedLogComplex pref;
    cplx f;
    if (for_R) {
        pref = sf::gamma_ratio({b - a, a + p.w + 1.0, a + p.wp + 1.0}, {sig + 1.0});
        f = sf::hyp2f1(a + p.wp + 1.0, -b - p.w, a - b + 1.0, 0.5 - x);
    } else {
        pref = sf::gamma_ratio({b - a, sig}, {b + p.w, b + p.wp});
        f = sf::hyp2f1(a + p.wp, -b - p.w + 1.0, a - b + 1.0, 0.5 - x);
    }
    pref *= sf::SignedLogComplex::from(-csinpi(a) / kPi);
    pref *= sf::SignedLogComplex::from(powers * f);
    return pref.value();
}

RHPair rh_in_direct(const ZWParams& p, cplx x) {
    RHPair in;
    in.R = rh_in_term(p, x, p.z, p.zp, true) + rh_in_term(p, x, p.zp, p.z, true);
    in.S = rh_in_term(p, x, p.z, p.zp, false) + rh_in_term(p, x, p.zp, p.z, false);
    return in;
}

}  // namespace

RHPair limit_rh_out(const ZWParams& p, cplx x, bool allow_swap) {
    if (std::abs(x.imag()) < 1e-14 && std::abs(x.real()) <= 0.5)
        throw DomainError("limit_rh_out: point on the inner segment");
    if (allow_swap && x.imag() == 0.0 && x.real() < -0.5) {
        RHPair r = rh_out_direct(swapped(p), -x);
        return {r.R, -r.S};
    }
    return rh_out_direct(p, x);
}

RHPair limit_rh_in(const ZWParams& p, cplx x, bool allow_swap) {
    if (std::abs(x.imag()) < 1e-14 && std::abs(x.real()) >= 0.5)
        throw DomainError("limit_rh_in: point on the outer rays");
    if (near_int(p.z - p.zp, rh::kDeltaMin))
        throw DomainError("limit_rh_in: z - z' too close to an integer");
    if (allow_swap && x.imag() == 0.0 && x.real() < 0.0) {
        RHPair r = rh_in_direct(swapped(p), -x);
        return {r.R, -r.S};
    }
    return rh_in_direct(p, x);
}

namespace {

double kernel_impl(const ZWParams& p, double x, double y) {
    bool xi = std::abs(x) < 0.5, yi = std::abs(y) < 0.5;
    double px = xi ? limit_psi_in(p, x) : limit_psi_out(p, x);
    double py = yi ? limit_psi_in(p, y) : limit_psi_out(p, y);
    if (px == 0.0 || py == 0.0) return 0.0;
    double root = std::sqrt(px * py);

    auto eval = [&](double t, bool inner) {
        return inner ? limit_rh_in(p, cplx(t, 0.0)) : limit_rh_out(p, cplx(t, 0.0));
    };
    auto fx = eval(x, xi);
    if (x != y) {
        auto fy = eval(y, yi);
        cplx top;
        if (xi == yi) top = fx.R * fy.S - fx.S * fy.R;
        else top = fx.R * fy.R - fx.S * fy.S;
        return root * (top / (x - y)).real();
    }
    const double h = 1e-4 * std::min(1.0, std::abs(std::abs(x) - 0.5));
    auto deriv = [&](double step) -> std::pair<cplx, cplx> {
        auto fp = eval(x + step, xi);
        auto fm = eval(x - step, xi);
        return {(fp.R - fm.R) / (2.0 * step), (fp.S - fm.S) / (2.0 * step)};
    };
    auto d1 = deriv(h);
    auto d2 = deriv(0.5 * h);
    auto d4 = deriv(0.25 * h);
    auto rich = [](cplx a, cplx b, cplx c) {
        cplx r1 = (4.0 * b - a) / 3.0;
        cplx r2 = (4.0 * c - b) / 3.0;
        return (16.0 * r2 - r1) / 15.0;
    };
    cplx dR = rich(d1.first, d2.first, d4.first);
    cplx dS = rich(d1.second, d2.second, d4.second);
    return px * (dR * fx.S - dS * fx.R).real();
}

double kernel_zstep(const ZWParams& p, double x, double y) {
    if (near_int(p.z - p.zp, rh::kDeltaMin)) {
        cplx zs = p.zp + std::round((p.z - p.zp).real());
        ZWParams plus = meas::classify(zs + rh::kPerturb, p.zp, p.w, p.wp);
        ZWParams minus = meas::classify(zs - rh::kPerturb, p.zp, p.w, p.wp);
        return 0.5 * (kernel_impl(plus, x, y) + kernel_impl(minus, x, y));
    }
    return kernel_impl(p, x, y);
}

}  // namespace

double kernel_K(const ZWParams& p, double x, double y) {
    if (!p.admissible) throw DomainError("kernel_K: parameters not admissible");
    if (std::abs(p.sigma()) < rh::kSigmaMin) {
        cplx shift = -p.sigma();
        ZWParams plus = meas::classify(p.z, p.zp, p.w, p.wp + shift + rh::kPerturb);
        ZWParams minus = meas::classify(p.z, p.zp, p.w, p.wp + shift - rh::kPerturb);
        return 0.5 * (kernel_zstep(plus, x, y) + kernel_zstep(minus, x, y));
    }
    return kernel_zstep(p, x, y);
}

double limit_L(const ZWParams& p, double x, double y) {
    bool xi = std::abs(x) < 0.5, yi = std::abs(y) < 0.5;
    if (xi == yi) return 0.0;
    double po = xi ? limit_psi_out(p, y) : limit_psi_out(p, x);
    double pi_ = xi ? limit_psi_in(p, x) : limit_psi_in(p, y);
    return std::sqrt(po * pi_) / (x - y);
}

BranchResiduals branching_check(const ZWParams& p, double x, double h) {
    BranchResiduals out;
    const cplx two_pi_i(0.0, 2.0 * kPi);
    bool inner = std::abs(x) < 0.5;
    // boundary values extrapolated linearly toward the axis
    auto jump = [&](bool of_S) {
        auto val = [&](double step) {
            auto up = inner ? limit_rh_out(p, cplx(x, step)) : limit_rh_in(p, cplx(x, step));
            auto dn = inner ? limit_rh_out(p, cplx(x, -step)) : limit_rh_in(p, cplx(x, -step));
            return of_S ? (dn.S - up.S) : (dn.R - up.R);
        };
        return 2.0 * val(0.5 * h) - val(h);
    };
    if (inner) {
        auto in = limit_rh_in(p, cplx(x, 0.0));
        double pin = limit_psi_in(p, x);
        out.first = std::abs(jump(true) / (two_pi_i * pin) - in.R);
        out.second = std::abs(jump(false) / (two_pi_i * pin) - in.S);
    } else {
        double pout = limit_psi_out(p, x);
        if (pout == 0.0) return out;  // nothing jumps where the weight vanishes
        auto o = limit_rh_out(p, cplx(x, 0.0));
        out.first = std::abs(jump(true) / (two_pi_i * pout) - o.R);
        out.second = std::abs(jump(false) / (two_pi_i * pout) - o.S);
    }
    return out;
}

double gap_probability(const ZWParams& p, double s, int order) {
    if (s <= 0.5) throw DomainError("gap_probability: interval must sit right of one half");
    std::vector<double> t, w;
    dpp::gauss_legendre(order, t, w);
    // map (0,1) -> (s, inf)
    std::vector<double> x(static_cast<size_t>(order)), rw(static_cast<size_t>(order));
    std::vector<RHPair> f(static_cast<size_t>(order));
    std::vector<RHPair> df(static_cast<size_t>(order));
    std::vector<double> psi(static_cast<size_t>(order));
    for (int i = 0; i < order; ++i) {
        double u = 0.5 + 0.5 * t[static_cast<size_t>(i)];
        double jac = 1.0 / ((1.0 - u) * (1.0 - u));
        x[static_cast<size_t>(i)] = s + u / (1.0 - u);
        rw[static_cast<size_t>(i)] = std::sqrt(0.5 * w[static_cast<size_t>(i)] * jac);
        double xi = x[static_cast<size_t>(i)];
        f[static_cast<size_t>(i)] = limit_rh_out(p, cplx(xi, 0.0));
        const double h = 1e-6 * std::max(1.0, xi);
        auto fp = limit_rh_out(p, cplx(xi + h, 0.0));
        auto fm = limit_rh_out(p, cplx(xi - h, 0.0));
        df[static_cast<size_t>(i)] = {(fp.R - fm.R) / (2.0 * h), (fp.S - fm.S) / (2.0 * h)};
        psi[static_cast<size_t>(i)] = limit_psi_out(p, xi);
    }
    Eigen::MatrixXd M(order, order);
    for (int i = 0; i < order; ++i)
        for (int j = 0; j < order; ++j) {
            double kij;
            if (i == j) {
                kij = psi[static_cast<size_t>(i)] *
                      (df[static_cast<size_t>(i)].R * f[static_cast<size_t>(i)].S -
                       df[static_cast<size_t>(i)].S * f[static_cast<size_t>(i)].R)
                          .real();
            } else {
                kij = std::sqrt(psi[static_cast<size_t>(i)] * psi[static_cast<size_t>(j)]) *
                      ((f[static_cast<size_t>(i)].R * f[static_cast<size_t>(j)].S -
                        f[static_cast<size_t>(i)].S * f[static_cast<size_t>(j)].R) /
                       (x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)]))
                          .real();
            }
            M(i, j) = (i == j ? 1.0 : 0.0) -
                      rw[static_cast<size_t>(i)] * rw[static_cast<size_t>(j)] * kij;
        }
    return M.determinant();
}

std::vector<PviPoint> pvi_sigma_residual(const ZWParams& p, const std::vector<double>& s_grid,
                                         int order) {
    double nu1 = 0.5 * p.sigma().real();
    cplx dz = p.z - p.zp, dw = p.w - p.wp;
    double nu34 = 0.25 * (dz * dz - dw * dw).real();        // nu3 nu4
    double nu3sq_plus = 0.5 * (dz * dz + dw * dw).real();   // nu3^2 + nu4^2

    double lo = *std::min_element(s_grid.begin(), s_grid.end());
    double hi = *std::max_element(s_grid.begin(), s_grid.end());
    const double step = 0.025;
    int count = static_cast<int>(std::ceil((hi - lo) / step)) + 9;
    double start = lo - 4.0 * step;

    std::vector<double> logdet(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        double s = start + i * step;
        double det = gap_probability(p, s, order);
        if (det <= 0.0) throw ConvergenceError("pvi_sigma_residual: nonpositive determinant");
        logdet[static_cast<size_t>(i)] = std::log(det);
    }
    // quadrature convergence probe at the left end, where the kernel is largest
    double probe = gap_probability(p, lo, 2 * order);
    if (std::abs(probe - std::exp(logdet[4])) > 1e-6 * std::max(1.0, std::abs(probe)))
        throw ConvergenceError("pvi_sigma_residual: quadrature did not settle");

    auto d1 = [&](const std::vector<double>& v, int i) {
        return (-v[static_cast<size_t>(i + 2)] + 8.0 * v[static_cast<size_t>(i + 1)] -
                8.0 * v[static_cast<size_t>(i - 1)] + v[static_cast<size_t>(i - 2)]) /
               (12.0 * step);
    };
    std::vector<double> sigma(static_cast<size_t>(count), 0.0);
    for (int i = 2; i + 2 < count; ++i) {
        double s = start + i * step;
        sigma[static_cast<size_t>(i)] =
            (s * s - 0.25) * d1(logdet, i) - nu1 * nu1 * s + 0.5 * nu34;
    }
    std::vector<PviPoint> out;
    for (double s : s_grid) {
        int i = static_cast<int>(std::llround((s - start) / step));
        i = std::max(4, std::min(count - 5, i));
        double sp = d1(sigma, i);
        double spp = (-sigma[static_cast<size_t>(i + 2)] + 16.0 * sigma[static_cast<size_t>(i + 1)] -
                      30.0 * sigma[static_cast<size_t>(i)] + 16.0 * sigma[static_cast<size_t>(i - 1)] -
                      sigma[static_cast<size_t>(i - 2)]) /
                     (12.0 * step * step);
        double sv = sigma[static_cast<size_t>(i)];
        double si = start + i * step;
        double lhs = -sp * std::pow((si * si - 0.25) * spp, 2);
        double quad = (sp + nu1 * nu1) * (sp + nu1 * nu1) *
                      (sp * sp + nu3sq_plus * sp + nu34 * nu34);
        double rhs = std::pow(2.0 * (si * sp - sv) * sp - nu1 * nu1 * nu34, 2) - quad;
        PviPoint pt;
        pt.s = si;
        pt.residual = std::abs(lhs - rhs);
        pt.scale = 1.0 + std::pow(std::abs(sp), 3);
        out.push_back(pt);
    }
    return out;
}

std::vector<LadderEntry> jacobi_limit_check(long long k, long long l, double zp, double wp,
                                            const std::vector<int>& n_list,
                                            const std::vector<double>& grid) {
    ZWParams p = meas::classify(cplx(static_cast<double>(k), 0.0), cplx(zp, 0.0),
                                cplx(static_cast<double>(l), 0.0), cplx(wp, 0.0), true);
    if (!p.admissible || k + l < 1)
        throw DomainError("jacobi_limit_check: parameters outside the integral family");
    int m = static_cast<int>(k + l);
    double alpha = zp - static_cast<double>(k), beta = wp - static_cast<double>(l);
    std::vector<LadderEntry> out;
    for (int n : n_list) {
        double worst = 0.0;
        for (double x : grid)
            for (double y : grid) {
                auto xn = meas::nearest_lattice_point(n, n * x);
                auto yn = meas::nearest_lattice_point(n, n * y);
                if (!xn.is_inner() || !yn.is_inner()) continue;
                double scaled = n * rh::kernel_KN(p, n, xn, yn);
                double lim = ortho::jacobi_cd_kernel(m, alpha, beta, x, y);
                worst = std::max(worst, std::abs(scaled - lim) / (1.0 + std::abs(lim)));
            }
        out.push_back({n, worst});
    }
    return out;
}

std::vector<LadderEntry> kernel_convergence(const ZWParams& p, const std::vector<int>& n_list,
                                            const std::vector<double>& grid) {
    std::vector<LadderEntry> out;
    for (int n : n_list) {
        double worst = 0.0;
        for (double x : grid)
            for (double y : grid) {
                auto xn = meas::nearest_lattice_point(n, n * x);
                auto yn = meas::nearest_lattice_point(n, n * y);
                double scaled = n * rh::kernel_KN(p, n, xn, yn);
                double lim = kernel_K(p, x, y);
                worst = std::max(worst, std::abs(scaled - lim) / (1.0 + std::abs(lim)));
            }
        out.push_back({n, worst});
    }
    return out;
}

}  // namespace zw::lim
