#include "zw/orthopoly.hpp"

#include <algorithm>
#include <cmath>

namespace zw::ortho {

namespace sf = zw::specfun;

double al_weight(const ALParams& p, double t) {
    auto r = sf::gamma_ratio({}, {p.u + 1.0 - t, p.up + 1.0 - t, p.v + 1.0 + t, p.vp + 1.0 + t});
    return r.real_value();
}

cplx al_value(int m, const ALParams& p, cplx t, int lower_bump) {
    return al_value_log(m, p, t, lower_bump).value();
}

sf::SignedLogComplex al_value_log(int m, const ALParams& p, cplx t, int lower_bump) {
    // the formula continues analytically past the moment threshold; only a
    // lower-parameter collision is fatal
    cplx lower = p.frakS() + (2.0 - 2.0 * m + lower_bump);
    if (sf::is_near_nonpositive_integer(lower))
        throw DomainError("al_value: lower parameter collision");

    // tail pochhammers T_k = (v' + 1 + t - m + k)_{m-k}, in log space so
    // large degrees cannot overflow
    std::vector<sf::SignedLogComplex> tail(static_cast<size_t>(m) + 1);
    tail[static_cast<size_t>(m)] = sf::SignedLogComplex::one();
    for (int k = m - 1; k >= 0; --k)
        tail[static_cast<size_t>(k)] =
            tail[static_cast<size_t>(k) + 1] *
            sf::SignedLogComplex::from(p.vp + 1.0 + t - static_cast<double>(m) +
                                       static_cast<double>(k));

    sf::SignedLogComplex coeff = sf::SignedLogComplex::one();
    double ref = tail[0].log_mag;
    cplx acc(0.0, 0.0);
    for (int k = 0; k <= m; ++k) {
        sf::SignedLogComplex term = coeff * tail[static_cast<size_t>(k)];
        if (!term.is_zero()) {
            if (term.log_mag > ref + 40.0) {
                acc *= std::exp(ref - term.log_mag);
                ref = term.log_mag;
            }
            acc += std::exp(term.log_mag - ref) * cplx(std::cos(term.phase), std::sin(term.phase));
        }
        double dk = k;
        cplx step = (static_cast<double>(-m) + dk) *
                    (p.u + p.vp + 1.0 - static_cast<double>(m) + dk) *
                    (p.up + p.vp + 1.0 - static_cast<double>(m) + dk) /
                    ((dk + 1.0) * (lower + dk));
        if (step == cplx(0.0, 0.0)) break;
        coeff *= sf::SignedLogComplex::from(step);
    }
    sf::SignedLogComplex out = sf::SignedLogComplex::from(acc);
    if (!out.is_zero()) out.log_mag += ref;
    return out;
}

cplx al_norm(int m, const ALParams& p) {
    cplx fS = p.frakS();
    if (fS.real() <= 2.0 * m - 1.0)
        throw DomainError("al_norm: moment condition Re frakS > 2m-1 fails");
    double dm = m;
    return sf::gamma_ratio({cplx(dm + 1.0, 0.0), fS + 1.0 - 2.0 * dm, fS + 2.0 - 2.0 * dm},
                           {fS - dm + 2.0, p.u + p.v + 1.0 - dm, p.u + p.vp + 1.0 - dm,
                            p.up + p.v + 1.0 - dm, p.up + p.vp + 1.0 - dm})
        .value();
}

std::pair<cplx, cplx> askey_lesky(int m, const ALParams& p, cplx t) {
    if (p.frakS().real() <= 2.0 * m - 2.0)
        throw DomainError("askey_lesky: moment condition Re frakS > 2m-2 fails");
    return {al_value(m, p, t), al_norm(m, p)};
}

cplx poly_pN(const meas::ZWParams& p, int n, cplx x) {
    return al_value(n, ALParams::from(p, n), x + 0.5 * (n - 1.0));
}

cplx poly_pN_tilde(const meas::ZWParams& p, int n, cplx x) {
    return al_value(n, ALParams::from(p, n), x + 0.5 * (n - 1.0), 1);
}

cplx poly_pNm1(const meas::ZWParams& p, int n, cplx x) {
    return al_value(n - 1, ALParams::from(p, n), x + 0.5 * (n - 1.0));
}

cplx norm_hNm1(const meas::ZWParams& p, int n) {
    return al_norm(n - 1, ALParams::from(p, n));
}

double cd_kernel_tilde(const meas::ZWParams& p, int n, meas::LatticePoint x,
                       meas::LatticePoint y) {
    if (!p.admissible) throw DomainError("cd_kernel_tilde: parameters not admissible");
    double fx = meas::weight_f(p, n, x);
    double fy = meas::weight_f(p, n, y);
    if (fx == 0.0 || fy == 0.0) return 0.0;
    double root = std::sqrt(fx * fy);
    double xv = x.value(), yv = y.value();

    ALParams al = ALParams::from(p, n);
    if (x == y) {
        // rank sum; exact for the projection and free of derivatives
        double t = xv + 0.5 * (n - 1.0);
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            cplx pm = al_value(m, al, cplx(t, 0.0));
            cplx hm = al_norm(m, al);
            acc += (pm * pm / hm).real();
        }
        return acc * root;
    }

    cplx hnm1 = norm_hNm1(p, n);
    cplx top;
    if (std::abs(p.sigma()) < 1e-4) {
        top = poly_pN_tilde(p, n, xv) * poly_pNm1(p, n, yv) -
              poly_pNm1(p, n, xv) * poly_pN_tilde(p, n, yv);
    } else {
        top = poly_pN(p, n, xv) * poly_pNm1(p, n, yv) - poly_pNm1(p, n, xv) * poly_pN(p, n, yv);
    }
    cplx val = top / (hnm1 * (xv - yv));
    return val.real() * root;
}

namespace {

// compensated dot product sum_i a_i b_i w_i
double kahan_dot(const std::vector<double>& a, const std::vector<double>& b,
                 const std::vector<double>& w) {
    double sum = 0.0, comp = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double term = a[i] * b[i] * w[i] - comp;
        double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
    }
    return sum;
}

}  // namespace

double FiniteOrthoSystem::eval(int m, double x) const {
    double pm1 = 0.0, pm = 1.0;
    for (int j = 0; j < m; ++j) {
        double next = (x - alpha[static_cast<size_t>(j)]) * pm - beta[static_cast<size_t>(j)] * pm1;
        pm1 = pm;
        pm = next;
    }
    return pm;
}

double FiniteOrthoSystem::ortho_residual() const {
    double worst = 0.0;
    for (size_t i = 0; i < values.size(); ++i)
        for (size_t j = 0; j < i; ++j) {
            double dot = kahan_dot(values[i], values[j], weight);
            worst = std::max(worst, std::abs(dot) / std::sqrt(norms[i] * norms[j]));
        }
    return worst;
}

FiniteOrthoSystem finite_orthogonalize(const std::vector<double>& nodes,
                                       const std::vector<double>& weight, int degree_cap) {
    if (nodes.size() != weight.size())
        throw DomainError("finite_orthogonalize: nodes/weight size mismatch");
    long long positive = 0;
    for (double wv : weight) {
        if (wv < 0.0) throw DomainError("finite_orthogonalize: negative weight");
        if (wv > 0.0) ++positive;
    }
    if (positive < degree_cap + 1)
        throw DomainError("finite_orthogonalize: fewer positive nodes than degrees requested");

    FiniteOrthoSystem sys;
    sys.nodes = nodes;
    sys.weight = weight;
    sys.degree_cap = degree_cap;
    const size_t npts = nodes.size();

    std::vector<double> prev(npts, 0.0), cur(npts, 1.0);
    sys.values.push_back(cur);
    sys.norms.push_back(kahan_dot(cur, cur, weight));
    for (int m = 0; m < degree_cap; ++m) {
        std::vector<double> xcur(npts);
        for (size_t i = 0; i < npts; ++i) xcur[i] = nodes[i] * cur[i];
        double a = kahan_dot(xcur, cur, weight) / sys.norms.back();
        double b = (m == 0) ? 0.0
                            : sys.norms[static_cast<size_t>(m)] / sys.norms[static_cast<size_t>(m) - 1];
        std::vector<double> next(npts);
        for (size_t i = 0; i < npts; ++i)
            next[i] = (nodes[i] - a) * cur[i] - (m == 0 ? 0.0 : b * prev[i]);

        // correction sweep against drift; touches lower degrees only, so the
        // polynomial stays monic
        for (size_t j = 0; j < sys.values.size(); ++j) {
            double proj = kahan_dot(next, sys.values[j], weight) / sys.norms[j];
            if (std::abs(proj) > 1e-12)
                for (size_t i = 0; i < npts; ++i) next[i] -= proj * sys.values[j][i];
        }

        sys.alpha.push_back(a);
        sys.beta.push_back(b);
        prev = cur;
        cur = next;
        sys.values.push_back(cur);
        sys.norms.push_back(kahan_dot(cur, cur, weight));
        if (sys.norms.back() <= 0.0)
            throw DomainError("finite_orthogonalize: rank deficiency before requested degree");
    }
    return sys;
}

double jacobi_cd_kernel(int m, double alpha, double beta, double x, double y) {
    if (alpha <= -1.0 || beta <= -1.0)
        throw DomainError("jacobi_cd_kernel: parameters must exceed -1");
    if (std::abs(x) >= 0.5 || std::abs(y) >= 0.5) return 0.0;

    // monic recurrence on (-1,1), mapped by s = 2x
    double ab = alpha + beta;
    std::vector<double> a(static_cast<size_t>(m)), b(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j) {
        if (j == 0)
            a[0] = (beta - alpha) / (ab + 2.0);
        else
            a[static_cast<size_t>(j)] =
                (beta * beta - alpha * alpha) / ((2.0 * j + ab) * (2.0 * j + ab + 2.0));
        if (j == 0)
            b[0] = 0.0;
        else if (j == 1)
            b[1] = 4.0 * (alpha + 1.0) * (beta + 1.0) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0));
        else
            b[static_cast<size_t>(j)] = 4.0 * j * (j + alpha) * (j + beta) * (j + ab) /
                                        ((2.0 * j + ab) * (2.0 * j + ab) * (2.0 * j + ab + 1.0) *
                                         (2.0 * j + ab - 1.0));
    }
    // mapped coefficients are a/2 and b/4; the mass on (-1/2,1/2) is the
    // Euler beta integral
    double h0 = std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                         std::lgamma(ab + 2.0));

    auto eval_all = [&](double t, std::vector<double>& vals) {
        vals.assign(static_cast<size_t>(m), 0.0);
        double pm1 = 0.0, pj = 1.0;
        for (int j = 0; j < m; ++j) {
            vals[static_cast<size_t>(j)] = pj;
            double next = (t - 0.5 * a[static_cast<size_t>(j)]) * pj -
                          (j == 0 ? 0.0 : 0.25 * b[static_cast<size_t>(j)] * pm1);
            pm1 = pj;
            pj = next;
        }
    };
    std::vector<double> px, py;
    eval_all(x, px);
    eval_all(y, py);

    double wx = std::pow(0.5 - x, alpha) * std::pow(0.5 + x, beta);
    double wy = std::pow(0.5 - y, alpha) * std::pow(0.5 + y, beta);
    double acc = 0.0, h = h0;
    for (int j = 0; j < m; ++j) {
        if (j > 0) h *= 0.25 * b[static_cast<size_t>(j)];
        acc += px[static_cast<size_t>(j)] * py[static_cast<size_t>(j)] / h;
    }
    return std::sqrt(wx * wy) * acc;
}

std::vector<double> hahn_nodes(long long k, long long l, int n) {
    std::vector<double> out;
    double lo = -0.5 * (n - 1) - static_cast<double>(l);
    for (long long j = 0; j < n + k + l; ++j) out.push_back(lo + static_cast<double>(j));
    return out;
}

double hahn_weight(long long k, long long l, int n, double zp, double wp, double y) {
    double c = 0.5 * (n + 1);
    return std::exp(std::lgamma(-y + zp + c) + std::lgamma(y + wp + c) -
                    std::lgamma(-y + static_cast<double>(k) + c) -
                    std::lgamma(y + static_cast<double>(l) + c));
}

double hahn_cd_kernel(long long k, long long l, int n, double zp, double wp, double x,
                      double y) {
    int m = static_cast<int>(k + l);
    if (m < 1) throw DomainError("hahn_cd_kernel: k + l must be at least 1");
    auto nodes = hahn_nodes(k, l, n);
    std::vector<double> wt;
    wt.reserve(nodes.size());
    for (double t : nodes) wt.push_back(hahn_weight(k, l, n, zp, wp, t));
    FiniteOrthoSystem sys = finite_orthogonalize(nodes, wt, m);

    double acc = 0.0;
    for (int j = 0; j < m; ++j)
        acc += sys.eval(j, x) * sys.eval(j, y) / sys.norms[static_cast<size_t>(j)];
    return std::sqrt(hahn_weight(k, l, n, zp, wp, x) * hahn_weight(k, l, n, zp, wp, y)) * acc;
}

}  // namespace zw::ortho
