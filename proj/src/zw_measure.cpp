#include "zw/zw_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace zw::meas {

namespace sf = zw::specfun;

Signature::Signature(std::vector<long long> p) : parts(std::move(p)) {
    for (size_t i = 1; i < parts.size(); ++i)
        if (parts[i - 1] < parts[i]) throw DomainError("Signature: parts must be non-increasing");
}

Signature Signature::parse(const std::string& text) {
    std::vector<long long> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        parts.push_back(std::stoll(tok));
    }
    if (parts.empty()) throw DomainError("Signature::parse: empty literal");
    return Signature(std::move(parts));
}

std::string Signature::str() const {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(parts[i]);
    }
    return out;
}

FrobeniusCoords frobenius(const Signature& lam) {
    // split into the positive diagram and the negated negative diagram;
    // zeros may go to either side, so they are simply dropped
    std::vector<long long> plus, minus;
    for (long long v : lam.parts)
        if (v > 0) plus.push_back(v);
    for (auto it = lam.parts.rbegin(); it != lam.parts.rend(); ++it)
        if (*it < 0) minus.push_back(-*it);

    auto frob = [](const std::vector<long long>& nu, std::vector<long long>& p,
                   std::vector<long long>& q) {
        auto col = [&nu](long long j) {  // transposed diagram row j (1-based)
            long long cnt = 0;
            for (long long r : nu)
                if (r >= j) ++cnt;
            return cnt;
        };
        for (long long i = 1; i <= static_cast<long long>(nu.size()); ++i) {
            if (nu[static_cast<size_t>(i - 1)] >= i) {
                p.push_back(nu[static_cast<size_t>(i - 1)] - i);
                q.push_back(col(i) - i);
            } else {
                break;
            }
        }
    };

    FrobeniusCoords fc;
    frob(plus, fc.p_plus, fc.q_plus);
    frob(minus, fc.p_minus, fc.q_minus);
    return fc;
}

LatticePoint lattice_point(int n, long long doubled) {
    if (((doubled - (n - 1)) % 2 + 2) % 2 != 0)
        throw DomainError("lattice_point: wrong parity for this N");
    return {doubled, n};
}

LatticePoint nearest_lattice_point(int n, double v) {
    double target = 2.0 * v;
    long long base = static_cast<long long>(std::floor(target));
    long long best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (long long d = base - 3; d <= base + 3; ++d) {
        if ((((d - (n - 1)) % 2) + 2) % 2 != 0) continue;
        double dist = std::abs(target - static_cast<double>(d));
        if (dist < best_d - 1e-9) {
            best_d = dist;
            best = d;
        }
        // ties (dist == best_d) keep the smaller d, already stored
    }
    return {best, n};
}

namespace {

bool is_real(cplx v, double tol) { return std::abs(v.imag()) <= tol; }

bool is_integer_real(cplx v, double tol) {
    return is_real(v, tol) && std::abs(v.real() - std::round(v.real())) <= tol;
}

PairInfo classify_pair(cplx a, cplx b, double tol) {
    PairInfo info;
    // principal: b = conj(a), a nonreal
    if (std::abs(b - std::conj(a)) <= tol && std::abs(a.imag()) > tol) {
        info.cls = PairClass::Principal;
        return info;
    }
    if (!is_real(a, tol) || !is_real(b, tol)) return info;
    double x = a.real(), y = b.real();

    // degenerate: a member equals an integer m and the partner exceeds m-1;
    // with both integral the smaller one is the vanishing threshold
    bool ax = is_integer_real(a, tol), bx = is_integer_real(b, tol);
    if (ax || bx) {
        long long ma = std::llround(x), mb = std::llround(y);
        if (ax && bx) {
            long long m = std::min(ma, mb);
            long long other = std::max(ma, mb);
            if (other > m - 1) {
                info.cls = PairClass::Degenerate;
                info.m = m;
            }
            return info;
        }
        long long m = ax ? ma : mb;
        double other = ax ? y : x;
        if (other > static_cast<double>(m) - 1.0 + tol) {
            info.cls = PairClass::Degenerate;
            info.m = m;
        }
        return info;
    }

    // complementary: both inside the same open unit interval (m, m+1)
    if (std::floor(x) == std::floor(y)) {
        info.cls = PairClass::Complementary;
        info.m = static_cast<long long>(std::floor(x));
    }
    return info;
}

}  // namespace

ZWParams classify(cplx z, cplx zp, cplx w, cplx wp, bool exact) {
    ZWParams p;
    p.z = z;
    p.zp = zp;
    p.w = w;
    p.wp = wp;
    p.exact = exact;
    double tol = exact ? 1e-15 : 1e-12;

    p.class_zz = classify_pair(z, zp, tol);
    p.class_ww = classify_pair(w, wp, tol);

    bool sigma_ok = p.sigma().real() > -1.0;
    p.admissible = sigma_ok && p.class_zz.in_Z() && p.class_ww.in_Z();
    if (p.admissible && p.class_zz.cls == PairClass::Degenerate &&
        p.class_ww.cls == PairClass::Degenerate) {
        p.admissible = (p.class_zz.m + p.class_ww.m) >= 0;
    }

    p.in_D0 = sigma_ok;
    for (cplx s : {z + w, z + wp, zp + w, zp + wp})
        if (sf::is_nonpositive_integer(s + 1.0, tol)) p.in_D0 = false;

    p.in_D_adm_prime = p.admissible &&
                       !(p.class_zz.cls == PairClass::Degenerate && p.class_zz.m < 0) &&
                       !(p.class_ww.cls == PairClass::Degenerate && p.class_ww.m < 0);
    return p;
}

namespace {

__int128 gcd128(__int128 a, __int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

const __int128 kGuard128 = (static_cast<__int128>(1) << 120);

}  // namespace

long long dim_weyl(const Signature& lam) {
    const int n = lam.n();
    __int128 num = 1, den = 1;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            __int128 top = static_cast<__int128>(lam.parts[static_cast<size_t>(i)] - i) -
                           static_cast<__int128>(lam.parts[static_cast<size_t>(j)] - j);
            __int128 bot = j - i;
            __int128 g1 = gcd128(top, den);
            if (g1 > 1) { top /= g1; den /= g1; }
            __int128 g2 = gcd128(num, bot);
            if (g2 > 1) { num /= g2; bot /= g2; }
            __int128 atop = top > 0 ? top : -top;
            if (atop != 0 && num > kGuard128 / atop)
                throw OverflowError("dim_weyl: exact value exceeds the 128-bit range");
            num *= top;
            den *= bot;
        }
    }
    __int128 result = num / den;
    if (result * den != num) throw Error("dim_weyl: internal non-integer result");
    if (result > static_cast<__int128>(std::numeric_limits<long long>::max()))
        throw OverflowError("dim_weyl: exact value exceeds long long");
    return static_cast<long long>(result);
}

double log_dim_weyl(const Signature& lam) {
    const int n = lam.n();
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            double top = static_cast<double>(lam.parts[static_cast<size_t>(i)] - i -
                                             lam.parts[static_cast<size_t>(j)] + j);
            acc += std::log(top) - std::log(static_cast<double>(j - i));
        }
    return acc;
}

double weight_f(const ZWParams& p, int n, LatticePoint x) {
    return weight_f(p, n, x.value());
}

double weight_f(const ZWParams& p, int n, double x) {
    double c = 0.5 * (n + 1);
    auto r = sf::gamma_ratio({}, {p.z - x + c, p.zp - x + c, p.w + x + c, p.wp + x + c});
    return r.real_value();
}

cplx normalizer(const ZWParams& p, int n) {
    std::vector<cplx> num, den;
    cplx sig = p.sigma();
    for (int i = 1; i <= n; ++i) {
        double di = i;
        num.push_back(sig + di);
        den.push_back(p.z + p.w + di);
        den.push_back(p.z + p.wp + di);
        den.push_back(p.zp + p.w + di);
        den.push_back(p.zp + p.wp + di);
        den.push_back(cplx(di, 0.0));
    }
    return sf::gamma_ratio(num, den).value();
}

MeasureValue measure(const ZWParams& p, const Signature& lam) {
    if (!p.in_D0) throw DomainError("measure: normalizer vanishes outside D0");
    const int n = lam.n();

    sf::SignedLogComplex acc = sf::SignedLogComplex::one();
    for (int i = 1; i <= n; ++i) {
        double li = static_cast<double>(lam.parts[static_cast<size_t>(i - 1)]);
        double di = i;
        acc *= sf::gamma_ratio({}, {p.z - li + di, p.zp - li + di, p.w + (n + 1.0) + li - di,
                                    p.wp + (n + 1.0) + li - di});
    }
    MeasureValue mv;
    mv.p_prime = 0.0;
    if (!acc.is_zero()) {
        acc.log_mag += 2.0 * log_dim_weyl(lam);
        mv.p_prime = acc.real_value();
    }
    mv.s_norm = normalizer(p, n);
    mv.p_n = mv.p_prime / mv.s_norm.real();
    return mv;
}

bool interlaces(const Signature& nu, const Signature& lam) {
    if (nu.n() + 1 != lam.n()) return false;
    for (int i = 0; i < nu.n(); ++i) {
        if (!(lam.parts[static_cast<size_t>(i)] >= nu.parts[static_cast<size_t>(i)] &&
              nu.parts[static_cast<size_t>(i)] >= lam.parts[static_cast<size_t>(i) + 1]))
            return false;
    }
    return true;
}

double cotransition_q(const Signature& nu, const Signature& lam) {
    if (!interlaces(nu, lam)) return 0.0;
    return std::exp(log_dim_weyl(nu) - log_dim_weyl(lam));
}

double coherency_residual(const ZWParams& p, int n, const Signature& nu, long long window) {
    if (nu.n() != n - 1) throw DomainError("coherency_residual: nu must have length N-1");
    double lhs = measure(p, nu).p_n;

    // lam interlacing above nu: lam_1 >= nu_1 >= lam_2 >= ... >= nu_{N-1} >= lam_N,
    // the two free ends truncated by the window
    std::vector<long long> lo(static_cast<size_t>(n)), hi(static_cast<size_t>(n));
    lo[0] = nu.parts[0];
    hi[0] = nu.parts[0] + window;
    for (int i = 1; i < n - 1; ++i) {
        lo[static_cast<size_t>(i)] = nu.parts[static_cast<size_t>(i)];
        hi[static_cast<size_t>(i)] = nu.parts[static_cast<size_t>(i - 1)];
    }
    lo[static_cast<size_t>(n - 1)] = nu.parts[static_cast<size_t>(n - 2)] - window;
    hi[static_cast<size_t>(n - 1)] = nu.parts[static_cast<size_t>(n - 2)];

    double sum = 0.0;
    std::vector<long long> idx(lo);
    while (true) {
        bool ordered = true;
        for (int i = 0; i + 1 < n; ++i)
            if (idx[static_cast<size_t>(i)] < idx[static_cast<size_t>(i + 1)]) { ordered = false; break; }
        if (ordered) {
            Signature cand{std::vector<long long>(idx)};
            if (interlaces(nu, cand)) sum += cotransition_q(nu, cand) * measure(p, cand).p_n;
        }
        int k = n - 1;
        while (k >= 0 && ++idx[static_cast<size_t>(k)] > hi[static_cast<size_t>(k)]) {
            idx[static_cast<size_t>(k)] = lo[static_cast<size_t>(k)];
            --k;
        }
        if (k < 0) break;
    }
    return std::abs(lhs - sum);
}

std::vector<LatticePoint> lambda_to_L(const Signature& lam) {
    const int n = lam.n();
    std::vector<LatticePoint> out;
    out.reserve(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i) {
        long long doubled = 2 * lam.parts[static_cast<size_t>(i - 1)] + (n + 1) - 2 * i;
        out.push_back({doubled, n});
    }
    return out;  // strictly decreasing
}

std::vector<LatticePoint> lambda_to_X(const Signature& lam) {
    const int n = lam.n();
    FrobeniusCoords fc = frobenius(lam);
    std::vector<LatticePoint> out;
    for (long long p : fc.p_plus) out.push_back({2 * p + n + 1, n});
    for (long long q : fc.q_plus) out.push_back({n - 1 - 2 * q, n});
    for (long long p : fc.p_minus) out.push_back({-2 * p - n - 1, n});
    for (long long q : fc.q_minus) out.push_back({-(n - 1) + 2 * q, n});
    std::sort(out.begin(), out.end());
    return out;
}

Signature X_to_lambda(const std::vector<LatticePoint>& conf, int n) {
    long long inner = 0, outer = 0;
    std::vector<long long> doubled;
    for (const LatticePoint& x : conf) {
        if (x.n != n) throw DomainError("X_to_lambda: mixed lattice sizes");
        doubled.push_back(x.doubled);
        (x.is_inner() ? inner : outer)++;
    }
    std::sort(doubled.begin(), doubled.end());
    if (std::adjacent_find(doubled.begin(), doubled.end()) != doubled.end())
        throw DomainError("X_to_lambda: configuration has multiplicities");
    if (inner != outer) throw DomainError("X_to_lambda: configuration is not balanced");

    // L = X symmetric-difference inner lattice
    std::vector<long long> L;
    for (long long d = -(n - 1); d <= n - 1; d += 2)
        if (!std::binary_search(doubled.begin(), doubled.end(), d)) L.push_back(d);
    for (long long d : doubled)
        if (std::llabs(d) >= n) L.push_back(d);
    std::sort(L.rbegin(), L.rend());
    if (static_cast<int>(L.size()) != n)
        throw DomainError("X_to_lambda: configuration does not define a signature");

    std::vector<long long> parts(static_cast<size_t>(n));
    for (int i = 1; i <= n; ++i)
        parts[static_cast<size_t>(i - 1)] = (L[static_cast<size_t>(i - 1)] - (n + 1) + 2 * i) / 2;
    return Signature(std::move(parts));
}

namespace {

void enumerate_rec(long long hi, long long lo, int slots, std::vector<long long>& cur,
                   std::vector<Signature>& out, std::uint64_t cap) {
    if (slots == 0) {
        if (out.size() >= cap) throw OverflowError("enumerate: cap exceeded");
        out.push_back(Signature(std::vector<long long>(cur)));
        return;
    }
    for (long long v = hi; v >= lo; --v) {
        cur.push_back(v);
        enumerate_rec(v, lo, slots - 1, cur, out, cap);
        cur.pop_back();
    }
}

}  // namespace

std::vector<Signature> enumerate_support(long long k, long long l, int n, std::uint64_t cap) {
    if (k + l < 0) throw DomainError("enumerate_support: empty box (k + l < 0)");
    return enumerate_box(-l, k, n, cap);
}

std::vector<Signature> enumerate_box(long long lo, long long hi, int n, std::uint64_t cap) {
    std::vector<Signature> out;
    std::vector<long long> cur;
    enumerate_rec(hi, lo, n, cur, out, cap);
    return out;
}

}  // namespace zw::meas
