#include "zw/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace zw::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2*pi)
constexpr size_t kSeriesCap = 100000;

// Stirling series coefficients B_{2n} / (2n (2n-1)).
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
};

bool near_integer(cplx v, double tol) {
    return std::abs(v.imag()) <= tol && std::abs(v.real() - std::round(v.real())) <= tol;
}

// log sin(pi z), unwound so that the reflection formula below yields the
// principal branch of log Gamma. Real arguments are limits from above.
cplx log_sin_pi(cplx z) {
    if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
    // sin(pi z) = -e^{-i pi z} (1 - e^{2 pi i z}) / (2i); |e^{2 pi i z}| <= 1
    // keeps 1 - q in the right half plane, so the principal log is continuous
    const cplx i(0.0, 1.0);
    cplx q = std::exp(2.0 * kPi * i * z);
    return -i * kPi * z + std::log(1.0 - q) - std::log(2.0) + i * kPi / 2.0;
}

cplx stirling_log_gamma(cplx z) {
    cplx lz = std::log(z);
    cplx acc = (z - 0.5) * lz - z + 0.5 * kLog2Pi;
    cplx zi = 1.0 / z;
    cplx zpow = zi;
    cplx z2 = zi * zi;
    for (double coeff : kStirling) {
        acc += coeff * zpow;
        zpow *= z2;
    }
    return acc;
}

}  // namespace

bool is_nonpositive_integer(cplx v, double tol) {
    return near_integer(v, tol) && v.real() < 0.5;
}

bool is_near_nonpositive_integer(cplx v, double tol) {
    return near_integer(v, tol) && v.real() < 0.5;
}

SignedLogComplex SignedLogComplex::zero() {
    return {-std::numeric_limits<double>::infinity(), 0.0};
}

SignedLogComplex SignedLogComplex::one() { return {0.0, 0.0}; }

SignedLogComplex SignedLogComplex::from(cplx v) {
    if (v == cplx(0.0, 0.0)) return zero();
    return {std::log(std::abs(v)), std::arg(v)};
}

SignedLogComplex SignedLogComplex::from_log(cplx log_value) {
    return {log_value.real(), log_value.imag()};
}

bool SignedLogComplex::is_zero() const { return std::isinf(log_mag) && log_mag < 0.0; }

cplx SignedLogComplex::value() const {
    if (is_zero()) return {0.0, 0.0};
    double m = std::exp(log_mag);
    return {m * std::cos(phase), m * std::sin(phase)};
}

double SignedLogComplex::real_value(double slack) const {
    if (is_zero()) return 0.0;
    double s = std::sin(phase);
    if (std::abs(s) > slack)
        throw DomainError("SignedLogComplex::real_value: phase is not consistent with a real number");
    double m = std::exp(log_mag);
    return m * std::cos(phase);
}

SignedLogComplex& SignedLogComplex::operator*=(const SignedLogComplex& o) {
    if (is_zero() || o.is_zero()) { *this = zero(); return *this; }
    log_mag += o.log_mag;
    phase += o.phase;
    return *this;
}

SignedLogComplex& SignedLogComplex::operator/=(const SignedLogComplex& o) {
    if (o.is_zero()) throw PoleError("SignedLogComplex: division by exact zero");
    if (is_zero()) return *this;
    log_mag -= o.log_mag;
    phase -= o.phase;
    return *this;
}

cplx log_gamma(cplx zeta) {
    if (is_nonpositive_integer(zeta))
        throw PoleError("log_gamma: pole at nonpositive integer");
    if (zeta.real() < 0.5) {
        // Reflection through Gamma(z) Gamma(1-z) = pi / sin(pi z).
        return std::log(kPi) - log_sin_pi(zeta) - log_gamma(1.0 - zeta);
    }
    // Shift into the region where the Stirling series is accurate.
    cplx shift(0.0, 0.0);
    cplx z = zeta;
    while (std::abs(z) < 12.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling_log_gamma(z) - shift;
}

SignedLogComplex gamma_ratio(const std::vector<cplx>& num, const std::vector<cplx>& den) {
    int num_poles = 0, den_poles = 0;
    for (const cplx& a : num)
        if (is_nonpositive_integer(a)) ++num_poles;
    for (const cplx& b : den)
        if (is_nonpositive_integer(b)) ++den_poles;
    if (num_poles > 0 && den_poles > 0)
        throw PoleError("gamma_ratio: poles in both numerator and denominator");
    if (num_poles > 0)
        throw PoleError("gamma_ratio: pole in numerator with regular denominator");
    if (den_poles > 0) return SignedLogComplex::zero();

    cplx acc(0.0, 0.0);
    for (const cplx& a : num) acc += log_gamma(a);
    for (const cplx& b : den) acc -= log_gamma(b);
    return SignedLogComplex::from_log(acc);
}

cplx pochhammer(cplx a, long long k) {
    cplx p(1.0, 0.0);
    for (long long j = 0; j < k; ++j) {
        cplx factor = a + static_cast<double>(j);
        if (is_nonpositive_integer(factor) && std::abs(factor) <= kIntegerTol) return {0.0, 0.0};
        p *= factor;
    }
    return p;
}

// ---------------------------------------------------------------------------
// Gauss 2F1
// ---------------------------------------------------------------------------

namespace {

// Number of terms a terminating parameter implies, or -1.
long long terminating_order(cplx a) {
    if (!near_integer(a, kIntegerTol)) return -1;
    double r = std::round(a.real());
    if (r > 0.0) return -1;
    return static_cast<long long>(-r);
}

cplx series_2f1(cplx a, cplx b, cplx c, cplx u, long long max_terms = -1) {
    cplx sum(1.0, 0.0);
    cplx term(1.0, 0.0);
    int small_count = 0;
    size_t cap = max_terms >= 0 ? static_cast<size_t>(max_terms) : kSeriesCap;
    for (size_t k = 0; k < cap; ++k) {
        double dk = static_cast<double>(k);
        cplx ratio_num = (a + dk) * (b + dk);
        if (ratio_num == cplx(0.0, 0.0)) return sum;  // terminated naturally
        term *= ratio_num * u / ((c + dk) * (dk + 1.0));
        sum += term;
        if (max_terms < 0) {
            if (std::abs(term) < 1e-16 * std::abs(sum)) {
                if (++small_count >= 3) return sum;
            } else {
                small_count = 0;
            }
        }
    }
    if (max_terms < 0)
        throw ConvergenceError("hyp2f1: series did not converge within the term cap");
    return sum;
}

cplx gr(std::initializer_list<cplx> num, std::initializer_list<cplx> den) {
    return gamma_ratio(std::vector<cplx>(num), std::vector<cplx>(den)).value();
}

struct Candidate {
    int id;
    double mapped_mod;
};

}  // namespace

cplx hyp2f1(cplx a, cplx b, cplx c, cplx u) {
    if (u == cplx(0.0, 0.0)) return {1.0, 0.0};

    long long ma = terminating_order(a);
    long long mb = terminating_order(b);
    long long m = -1;
    if (ma >= 0 && (mb < 0 || ma <= mb)) m = ma;
    else if (mb >= 0) { std::swap(a, b); m = mb; }

    if (is_nonpositive_integer(c)) {
        long long mc = terminating_order(c);
        if (m < 0 || mc < m)
            throw PoleError("hyp2f1: lower parameter at a nonpositive integer");
    }
    if (m >= 0) return series_2f1(a, b, c, u, m + 1);

    if (u.imag() == 0.0 && u.real() >= 1.0)
        throw DomainError("hyp2f1: argument on the branch cut [1, inf)");

    const cplx one(1.0, 0.0);
    // Mapped arguments of the standard linear-fractional transformations.
    std::array<cplx, 6> w = {
        u,                  // 0: identity
        u / (u - one),      // 1: Pfaff, no gamma coefficients
        one - u,            // 2: needs c-a-b noninteger
        one / u,            // 3: needs a-b noninteger
        one / (one - u),    // 4: needs a-b noninteger
        one - one / u,      // 5: needs c-a-b noninteger
    };
    std::array<Candidate, 6> cand;
    for (int i = 0; i < 6; ++i) cand[i] = {i, std::abs(w[i])};
    std::sort(cand.begin(), cand.end(),
              [](const Candidate& x, const Candidate& y) { return x.mapped_mod < y.mapped_mod; });

    bool ab_ok = !near_integer(a - b, kCollisionTol);
    bool cab_ok = !near_integer(c - a - b, kCollisionTol);

    auto usable = [&](int id) {
        switch (id) {
            case 0: case 1: return true;
            case 2: case 5: return cab_ok;
            default: return ab_ok;
        }
    };

    int pick = -1;
    for (const Candidate& cd : cand) {
        if (cd.mapped_mod <= 0.85 && usable(cd.id)) { pick = cd.id; break; }
    }
    if (pick < 0) {
        for (const Candidate& cd : cand) {
            if (cd.mapped_mod <= 1.0 - 1e-6 && usable(cd.id)) { pick = cd.id; break; }
        }
    }
    if (pick < 0)
        throw DomainError("hyp2f1: no usable transformation (parameter collision near the cut)");

    switch (pick) {
        case 0:
            return series_2f1(a, b, c, u);
        case 1:
            return std::pow(one - u, -a) * series_2f1(a, c - b, c, w[1]);
        case 2: {
            cplx t1 = gr({c, c - a - b}, {c - a, c - b}) * series_2f1(a, b, a + b - c + one, w[2]);
            cplx t2 = std::pow(one - u, c - a - b) * gr({c, a + b - c}, {a, b}) *
                      series_2f1(c - a, c - b, c - a - b + one, w[2]);
            return t1 + t2;
        }
        case 3: {
            cplx t1 = gr({c, b - a}, {b, c - a}) * std::pow(-u, -a) *
                      series_2f1(a, one - c + a, one - b + a, w[3]);
            cplx t2 = gr({c, a - b}, {a, c - b}) * std::pow(-u, -b) *
                      series_2f1(b, one - c + b, one - a + b, w[3]);
            return t1 + t2;
        }
        case 4: {
            cplx t1 = std::pow(one - u, -a) * gr({c, b - a}, {b, c - a}) *
                      series_2f1(a, c - b, a - b + one, w[4]);
            cplx t2 = std::pow(one - u, -b) * gr({c, a - b}, {a, c - b}) *
                      series_2f1(b, c - a, b - a + one, w[4]);
            return t1 + t2;
        }
        default: {
            cplx t1 = gr({c, c - a - b}, {c - a, c - b}) * std::pow(u, -a) *
                      series_2f1(a, a - c + one, a + b - c + one, w[5]);
            cplx t2 = gr({c, a + b - c}, {a, b}) * std::pow(one - u, c - a - b) *
                      std::pow(u, a - c) * series_2f1(c - a, one - a, c - a - b + one, w[5]);
            return t1 + t2;
        }
    }
}

// ---------------------------------------------------------------------------
// Regularized 3F2 at unit argument
// ---------------------------------------------------------------------------

namespace {

struct Params3F2 {
    cplx a, b, c, e, f;
    cplx excess() const { return e + f - a - b - c; }
};

// Smallest terminating order among the upper parameters, or -1.
long long terminating_order_3f2(const Params3F2& p) {
    long long best = -1;
    for (cplx v : {p.a, p.b, p.c}) {
        long long t = terminating_order(v);
        if (t >= 0 && (best < 0 || t < best)) best = t;
    }
    return best;
}

// Lower parameters exactly at nonpositive integers force the series to start
// later; lower parameters merely near one are rejected.
long long series_start(const Params3F2& p, bool& ok) {
    ok = true;
    long long k0 = 0;
    for (cplx v : {p.e, p.f}) {
        if (is_nonpositive_integer(v, kIntegerTol)) {
            k0 = std::max(k0, 1 - static_cast<long long>(std::llround(v.real())));
        } else if (is_near_nonpositive_integer(v)) {
            ok = false;
        }
    }
    return k0;
}

// Sum_{k >= k0} (a)_k (b)_k (c)_k / (k! Gamma(e+k) Gamma(f+k)); the series of
// the regularized function before division by Gamma(excess). Accumulated
// against a floating log-scale reference so that transiently huge terms
// cannot overflow even when the final value is moderate.
SignedLogComplex entire_series(const Params3F2& p, long long k0, long long m,
                               double& tail_bound) {
    tail_bound = 0.0;
    if (m >= 0 && m < k0) return SignedLogComplex::zero();

    // Leading term at k0, built in log space.
    SignedLogComplex term = SignedLogComplex::one();
    for (cplx upper : {p.a, p.b, p.c}) {
        cplx poch = pochhammer(upper, k0);
        if (poch == cplx(0.0, 0.0)) return SignedLogComplex::zero();
        term *= SignedLogComplex::from(poch);
    }
    double dk0 = static_cast<double>(k0);
    term /= SignedLogComplex::from_log(log_gamma(cplx(dk0 + 1.0, 0.0)));
    term /= SignedLogComplex::from_log(log_gamma(p.e + dk0));
    term /= SignedLogComplex::from_log(log_gamma(p.f + dk0));

    double ref = term.log_mag;  // current log scale of the accumulator
    cplx acc(0.0, 0.0);
    int small_count = 0;
    size_t cap = m >= 0 ? static_cast<size_t>(m + 1) : kSeriesCap + static_cast<size_t>(k0);
    double last_mag = 0.0;
    for (size_t k = static_cast<size_t>(k0); k < cap; ++k) {
        if (term.log_mag > ref + 40.0) {  // rescale before the term dwarfs acc
            acc *= std::exp(ref - term.log_mag);
            ref = term.log_mag;
        }
        double rel_mag = std::exp(term.log_mag - ref);
        acc += rel_mag * cplx(std::cos(term.phase), std::sin(term.phase));
        last_mag = rel_mag;

        double dk = static_cast<double>(k);
        cplx num = (p.a + dk) * (p.b + dk) * (p.c + dk);
        if (num == cplx(0.0, 0.0)) break;  // terminated
        term *= SignedLogComplex::from(num);
        term /= SignedLogComplex::from((dk + 1.0) * (p.e + dk) * (p.f + dk));
        if (m < 0) {
            if (last_mag < 1e-16 * std::abs(acc)) {
                if (++small_count >= 3) break;
            } else {
                small_count = 0;
            }
        }
    }
    if (m < 0 && small_count < 3) {
        // Cap reached: polynomial tail t_k ~ C k^{-1-s}; report the remainder.
        double s = p.excess().real();
        tail_bound = last_mag * std::exp(ref) * static_cast<double>(kSeriesCap) /
                     std::max(s, 1e-3);
    }
    SignedLogComplex out = SignedLogComplex::from(acc);
    if (!out.is_zero()) out.log_mag += ref;
    return out;
}

}  // namespace

Hyp3F2Result hyp3f2_reg(cplx a, cplx b, cplx c, cplx e, cplx f) {
    Params3F2 orig{a, b, c, e, f};

    // Candidate parametrizations related by the two-term Thomae transforms.
    // The regularized function is invariant, so picking the one with the
    // largest excess (or a terminating series) costs nothing.
    std::vector<Params3F2> cands;
    cands.push_back(orig);
    const std::array<cplx, 3> uppers = {a, b, c};
    cplx s = orig.excess();
    for (int i = 0; i < 3; ++i) {
        cplx p = uppers[i];
        cplx q1 = uppers[(i + 1) % 3], q2 = uppers[(i + 2) % 3];
        // excess of the image equals the pivot upper parameter
        cands.push_back({e - p, f - p, s, s + q1, s + q2});
        // excess of the image equals lower-minus-pivot, both ways
        cands.push_back({p, f - q1, f - q2, e + f - q1 - q2, f});  // excess e - p
        cands.push_back({p, e - q1, e - q2, e + f - q1 - q2, e});  // excess f - p
    }

    int best = -1;
    long long best_m = -1;
    double best_excess = -std::numeric_limits<double>::infinity();
    // Prefer a terminating series (shortest); otherwise maximize the excess.
    for (size_t i = 0; i < cands.size(); ++i) {
        bool lowers_ok;
        long long k0 = series_start(cands[i], lowers_ok);
        if (!lowers_ok) continue;
        long long m = terminating_order_3f2(cands[i]);
        if (m >= 0) {
            if (best_m < 0 || m < best_m) { best = static_cast<int>(i); best_m = m; }
            continue;
        }
        if (best_m >= 0) continue;
        cplx ex = cands[i].excess();
        if (is_near_nonpositive_integer(ex) && !is_nonpositive_integer(ex)) continue;
        if (is_nonpositive_integer(ex)) continue;  // series would diverge
        if (ex.real() > best_excess) { best_excess = ex.real(); best = static_cast<int>(i); }
        (void)k0;
    }
    if (best < 0 || (best_m < 0 && best_excess <= 0.1))
        throw DomainError("hyp3f2_reg: no parametrization with a convergent series "
                          "is reachable by one Thomae transform");

    const Params3F2& ch = cands[static_cast<size_t>(best)];
    bool lowers_ok;
    long long k0 = series_start(ch, lowers_ok);
    long long m = terminating_order_3f2(ch);

    Hyp3F2Result out;
    SignedLogComplex series = entire_series(ch, k0, m, out.tail_bound);
    out.regularized_log = series;
    if (!series.is_zero() && !is_nonpositive_integer(ch.excess()))
        out.regularized_log /= SignedLogComplex::from_log(log_gamma(ch.excess()));
    else if (is_nonpositive_integer(ch.excess()))
        out.regularized_log = SignedLogComplex::zero();
    out.regularized = out.regularized_log.value();

    // Unregularized value of the original parametrization, when it exists.
    long long m_orig = terminating_order_3f2(orig);
    bool e_pole = is_nonpositive_integer(e), f_pole = is_nonpositive_integer(f);
    cplx s_orig = orig.excess();
    if (m_orig >= 0) {
        if (!((e_pole && -e.real() < static_cast<double>(m_orig)) ||
              (f_pole && -f.real() < static_cast<double>(m_orig)))) {
            cplx sum(1.0, 0.0), term(1.0, 0.0);
            for (long long k = 0; k < m_orig; ++k) {
                double dk = static_cast<double>(k);
                term *= (a + dk) * (b + dk) * (c + dk) / ((dk + 1.0) * (e + dk) * (f + dk));
                sum += term;
            }
            out.raw = sum;
        }
    } else if (s_orig.real() > 0.0 && !e_pole && !f_pole && !is_nonpositive_integer(s_orig)) {
        SignedLogComplex r = out.regularized_log;
        r *= SignedLogComplex::from_log(log_gamma(e) + log_gamma(f) + log_gamma(s_orig));
        out.raw = r.value();
    }
    return out;
}

cplx hyp3f2(cplx a, cplx b, cplx c, cplx e, cplx f) {
    Hyp3F2Result r = hyp3f2_reg(a, b, c, e, f);
    if (!r.raw)
        throw ConvergenceError("hyp3f2: series neither terminates nor converges");
    return *r.raw;
}

}  // namespace zw::specfun
