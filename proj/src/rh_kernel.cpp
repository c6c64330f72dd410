#include "zw/rh_kernel.hpp"

#include <cmath>

namespace zw::rh {

namespace sf = zw::specfun;
using meas::LatticePoint;
using meas::ZWParams;

namespace {

constexpr double kPi = 3.14159265358979323846;

cplx csin_pi(cplx v) { return std::sin(kPi * v); }

bool near_int(cplx v, double tol) {
    return std::abs(v.imag()) <= tol && std::abs(v.real() - std::round(v.real())) <= tol;
}

}  // namespace

bool needs_perturbation(const ZWParams& p) {
    return std::abs(p.sigma()) < kSigmaMin || near_int(p.z - p.zp, kDeltaMin);
}

double psi_in(const ZWParams& p, int n, double x) {
    double c = 0.5 * (n + 1);
    auto r = sf::gamma_ratio({-x + p.z + c, -x + p.zp + c, x + p.w + c, x + p.wp + c},
                             {cplx(-x + c, 0.0), cplx(-x + c, 0.0), cplx(x + c, 0.0),
                              cplx(x + c, 0.0)});
    return r.real_value();
}

double psi_out(const ZWParams& p, int n, double x) {
    double c = 0.5 * (n + 1);
    cplx poch = sf::pochhammer(cplx(x - 0.5 * (n - 1), 0.0), n);
    auto denom = sf::gamma_ratio({}, {-x + p.z + c, -x + p.zp + c, x + p.w + c, x + p.wp + c});
    if (denom.is_zero()) return 0.0;
    auto full = sf::SignedLogComplex::from(poch * poch) * denom;
    return full.real_value();
}

double psi_point(const ZWParams& p, int n, LatticePoint x) {
    return x.is_inner() ? psi_in(p, n, x.value()) : psi_out(p, n, x.value());
}

double psi_cap(const ZWParams& p, int n, LatticePoint x) {
    return x.is_inner() ? 1.0 / psi_in(p, n, x.value()) : psi_out(p, n, x.value());
}

namespace {

RHPair rh_out_core(const ZWParams& p, int n, cplx zeta) {
    sf::SignedLogComplex poch = sf::SignedLogComplex::one();
    for (int j = 0; j < n; ++j) {
        cplx factor = zeta - 0.5 * (n - 1.0) + static_cast<double>(j);
        if (std::abs(factor) < 1e-200)
            throw PoleError("rh_out: evaluation point on the inner lattice");
        poch *= sf::SignedLogComplex::from(factor);
    }
    ortho::ALParams al = ortho::ALParams::from(p, n);
    cplx t = zeta + 0.5 * (n - 1.0);
    RHPair out;
    out.R = (ortho::al_value_log(n, al, t) / poch).value();
    auto s_log = ortho::al_value_log(n - 1, al, t) / poch;
    s_log /= sf::SignedLogComplex::from(ortho::norm_hNm1(p, n));
    out.S = s_log.value();
    return out;
}

// shared two-term assembly for the inner pair; `for_R` picks between the two
// closed forms
cplx inner_term(const ZWParams& p, int n, cplx zeta, cplx a, cplx b, bool for_R) {
    double c = 0.5 * (n + 1);
    cplx sig = p.sigma();
    cplx e1 = a - b + 1.0;
    cplx e2 = static_cast<double>(n) + 1.0 + a + p.wp;

    sf::SignedLogComplex pref;
    sf::Hyp3F2Result f;
    if (for_R) {
        pref = sf::gamma_ratio({b - a, a + p.w + 1.0, a + p.wp + 1.0}, {sig + 1.0});
        pref *= sf::gamma_ratio({zeta + c, -zeta + c, static_cast<double>(n) + 1.0 + sig},
                                {-zeta + b + c, zeta + p.w + c, e2});
        f = sf::hyp3f2_reg(a + p.wp + 1.0, -b - p.w, -zeta + a + c, e1, e2);
    } else {
        pref = sf::gamma_ratio({b - a, sig}, {b + p.w, b + p.wp});
        pref *= sf::gamma_ratio({zeta + c, -zeta + c, cplx(n + 1.0, 0.0)},
                                {-zeta + b + c, zeta + p.w + c, e2});
        f = sf::hyp3f2_reg(-b - p.w + 1.0, a + p.wp, -zeta + a + c, e1, e2);
    }
    // restore the unregularized series value
    cplx s_f = zeta + p.w + c;
    pref *= sf::SignedLogComplex::from_log(sf::log_gamma(e1) + sf::log_gamma(e2) +
                                           sf::log_gamma(s_f));
    pref *= f.regularized_log;
    pref *= sf::SignedLogComplex::from(-csin_pi(a) / kPi);
    return pref.value();
}

RHPair rh_in_core(const ZWParams& p, int n, cplx zeta) {
    double c = 0.5 * (n + 1);
    // poles sit on the outer lattice
    if (sf::is_nonpositive_integer(zeta + c) || sf::is_nonpositive_integer(-zeta + c))
        throw PoleError("rh_in: evaluation point on the outer lattice");
    RHPair in;
    in.R = inner_term(p, n, zeta, p.z, p.zp, true) + inner_term(p, n, zeta, p.zp, p.z, true);
    in.S = inner_term(p, n, zeta, p.z, p.zp, false) + inner_term(p, n, zeta, p.zp, p.z, false);
    return in;
}

}  // namespace

RHPair rh_out(const ZWParams& p, int n, cplx zeta) {
    if (std::abs(p.sigma()) < kSigmaMin)
        throw DomainError("rh_out: parameter sum too close to zero");
    return rh_out_core(p, n, zeta);
}

RHPair rh_in(const ZWParams& p, int n, cplx zeta) {
    if (std::abs(p.sigma()) < kSigmaMin)
        throw DomainError("rh_in: parameter sum too close to zero");
    if (near_int(p.z - p.zp, kDeltaMin))
        throw DomainError("rh_in: z - z' too close to an integer");
    return rh_in_core(p, n, zeta);
}

namespace {

double kernel_impl(const ZWParams& p, int n, LatticePoint x, LatticePoint y) {
    double xv = x.value(), yv = y.value();
    bool xi = x.is_inner(), yi = y.is_inner();
    double px = xi ? psi_in(p, n, xv) : psi_out(p, n, xv);
    double py = yi ? psi_in(p, n, yv) : psi_out(p, n, yv);
    if (px == 0.0 || py == 0.0) return 0.0;
    double root = std::sqrt(px * py);

    auto fx = xi ? rh_in_core(p, n, cplx(xv, 0.0)) : rh_out_core(p, n, cplx(xv, 0.0));
    if (!(x == y)) {
        auto fy = yi ? rh_in_core(p, n, cplx(yv, 0.0)) : rh_out_core(p, n, cplx(yv, 0.0));
        cplx top;
        if (!xi && !yi) top = fx.R * fy.S - fx.S * fy.R;
        else if (!xi && yi) top = fx.R * fy.R - fx.S * fy.S;
        else if (xi && !yi) top = fx.R * fy.R - fx.S * fy.S;
        else top = fx.R * fy.S - fx.S * fy.R;
        return root * (top / (xv - yv)).real();
    }

    // diagonal: psi (R' S - S' R) by central differences; the step is kept
    // large enough that rounding noise stays below the truncation error and
    // two Richardson levels remove the latter
    auto deriv = [&](double h) -> std::pair<cplx, cplx> {
        auto fp = xi ? rh_in_core(p, n, cplx(xv + h, 0.0)) : rh_out_core(p, n, cplx(xv + h, 0.0));
        auto fm = xi ? rh_in_core(p, n, cplx(xv - h, 0.0)) : rh_out_core(p, n, cplx(xv - h, 0.0));
        return {(fp.R - fm.R) / (2.0 * h), (fp.S - fm.S) / (2.0 * h)};
    };
    const double h = 1e-3;
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

}  // namespace

namespace {

// Perturb along real parameter directions so that conjugate-pair phase
// cancellations survive; straddling the singular point and averaging leaves
// a quadratic error.
double kernel_zstep(const ZWParams& p, int n, LatticePoint x, LatticePoint y) {
    if (near_int(p.z - p.zp, kDeltaMin)) {
        cplx zs = p.zp + std::round((p.z - p.zp).real());
        ZWParams plus = meas::classify(zs + kPerturb, p.zp, p.w, p.wp);
        ZWParams minus = meas::classify(zs - kPerturb, p.zp, p.w, p.wp);
        return 0.5 * (kernel_impl(plus, n, x, y) + kernel_impl(minus, n, x, y));
    }
    return kernel_impl(p, n, x, y);
}

double kernel_eval(const ZWParams& p, int n, LatticePoint x, LatticePoint y) {
    if (std::abs(p.sigma()) < kSigmaMin) {
        cplx shift = -p.sigma();  // move to the singular sheet, then straddle it
        ZWParams plus = meas::classify(p.z, p.zp, p.w, p.wp + shift + kPerturb);
        ZWParams minus = meas::classify(p.z, p.zp, p.w, p.wp + shift - kPerturb);
        return 0.5 * (kernel_zstep(plus, n, x, y) + kernel_zstep(minus, n, x, y));
    }
    return kernel_zstep(p, n, x, y);
}

}  // namespace

double kernel_KN(const ZWParams& p, int n, LatticePoint x, LatticePoint y) {
    if (!p.in_D_adm_prime)
        throw DomainError("kernel_KN: parameters outside the allowed set");
    return kernel_eval(p, n, x, y);
}

}  // namespace zw::rh
