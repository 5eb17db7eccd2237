#include "drwitt/recognize.hpp"

#define MPFR_USE_NO_MACRO
#include <mpfr.h>

#include <algorithm>

#include "drwitt/intmat.hpp"
#include "drwitt/symplectic.hpp"

namespace drwitt {

namespace {

// ---- integer polynomial helpers (constant term first) ----

long pdeg(const std::vector<mpz_class>& p) {
    long d = (long)p.size() - 1;
    while (d >= 0 && p[d] == 0) --d;
    return d;
}

// exact division test in Q[x] via synthetic division by a primitive divisor
bool poly_divides(const std::vector<mpz_class>& p, const std::vector<mpz_class>& g) {
    long dp = pdeg(p), dg = pdeg(g);
    if (dg < 0 || dp < dg) return false;
    std::vector<mpq_class> r(p.begin(), p.begin() + (dp + 1));
    for (long i = dp; i >= dg; --i) {
        if (r[i] == 0) continue;
        mpq_class q = r[i] / g[dg];
        for (long j = 0; j <= dg; ++j) r[i - dg + j] -= q * g[j];
    }
    for (long i = 0; i < dg; ++i)
        if (r[i] != 0) return false;
    return true;
}

// ---- dense polynomial arithmetic over F_q (q a small odd prime) ----

using fqpoly = std::vector<long>;  // constant term first, entries in [0, q)

long fq_deg(const fqpoly& a) {
    long d = (long)a.size() - 1;
    while (d >= 0 && a[d] == 0) --d;
    return d;
}

void fq_trim(fqpoly& a) { a.resize(fq_deg(a) + 1); }

fqpoly fq_mulmod(const fqpoly& a, const fqpoly& b, const fqpoly& m, long q) {
    long da = fq_deg(a), db = fq_deg(b), dm = fq_deg(m);
    if (da < 0 || db < 0) return {};
    fqpoly c(da + db + 1, 0);
    for (long i = 0; i <= da; ++i) {
        if (!a[i]) continue;
        for (long j = 0; j <= db; ++j) c[i + j] = (c[i + j] + a[i] * b[j]) % q;
    }
    // reduce modulo m (monic-normalized divisor)
    long lead_inv = 1;
    {
        long l = m[dm] % q, t = 1, e = q - 2, base = l;
        while (e) {
            if (e & 1) t = t * base % q;
            base = base * base % q;
            e >>= 1;
        }
        lead_inv = t;
    }
    for (long i = (long)c.size() - 1; i >= dm; --i) {
        long f = c[i] * lead_inv % q;
        if (!f) continue;
        for (long j = 0; j <= dm; ++j)
            c[i - dm + j] = ((c[i - dm + j] - f * m[j]) % q + q) % q;
    }
    c.resize(dm);
    fq_trim(c);
    return c;
}

fqpoly fq_gcd(fqpoly a, fqpoly b, long q) {
    fq_trim(a);
    fq_trim(b);
    while (fq_deg(b) >= 0) {
        long db = fq_deg(b);
        long linv;
        {
            long t = 1, e = q - 2, base = b[db] % q;
            while (e) {
                if (e & 1) t = t * base % q;
                base = base * base % q;
                e >>= 1;
            }
            linv = t;
        }
        for (long i = fq_deg(a); i >= db; --i) {
            long f = a[i] * linv % q;
            if (!f) continue;
            for (long j = 0; j <= db; ++j)
                a[i - db + j] = ((a[i - db + j] - f * b[j]) % q + q) % q;
        }
        fq_trim(a);
        std::swap(a, b);
    }
    if (fq_deg(a) >= 0) {
        // normalize monic so callers can compare degrees only
        long da = fq_deg(a), linv;
        long t = 1, e = q - 2, base = a[da] % q;
        while (e) {
            if (e & 1) t = t * base % q;
            base = base * base % q;
            e >>= 1;
        }
        linv = t;
        for (auto& c : a) c = c * linv % q;
    }
    return a;
}

fqpoly fq_derivative(const fqpoly& a, long q) {
    fqpoly d;
    for (long i = 1; i <= fq_deg(a); ++i) d.push_back(a[i] * (i % q) % q);
    fq_trim(d);
    return d;
}

// x^(q^r) mod m by repeated Frobenius powering
fqpoly fq_xpow_frob(const fqpoly& prev, const fqpoly& m, long q) {
    // prev holds x^(q^(r-1)) mod m; raise it to the q-th power
    fqpoly r = {1};
    fqpoly base = prev;
    long e = q;
    while (e) {
        if (e & 1) r = fq_mulmod(r, base, m, q);
        base = fq_mulmod(base, base, m, q);
        e >>= 1;
    }
    return r;
}

// multiset of irreducible factor degrees of p mod q, or empty if unusable
std::vector<long> fq_factor_degrees(const std::vector<mpz_class>& p, long q) {
    long d = pdeg(p);
    fqpoly f(d + 1);
    for (long i = 0; i <= d; ++i) {
        f[i] = mpz_fdiv_ui(p[i].get_mpz_t(), (unsigned long)q);
    }
    if (fq_deg(f) != d) return {};  // leading coefficient vanished
    fqpoly der = fq_derivative(f, q);
    fqpoly g = fq_gcd(f, der, q);
    if (fq_deg(g) != 0) return {};  // not squarefree mod q
    std::vector<long> degrees;
    fqpoly xq = {0, 1};  // x^(q^0) = x
    fqpoly rem = f;
    long r = 0;
    while (fq_deg(rem) > 0) {
        ++r;
        if (2 * r > fq_deg(rem)) {
            degrees.push_back(fq_deg(rem));
            break;
        }
        xq = fq_xpow_frob(xq, rem, q);
        fqpoly t = xq;
        if ((long)t.size() < 2) t.resize(2, 0);
        t[1] = ((t[1] - 1) % q + q) % q;  // x^(q^r) - x
        fqpoly h = fq_gcd(rem, t, q);
        long dh = fq_deg(h);
        if (dh > 0) {
            for (long i = 0; i < dh / r; ++i) degrees.push_back(r);
            // divide rem by h exactly
            fqpoly quo(fq_deg(rem) - dh + 1, 0);
            fqpoly cur = rem;
            for (long i = fq_deg(cur); i >= dh; --i) {
                long c = cur[i];
                if (c) {
                    quo[i - dh] = c;  // h is monic
                    for (long j = 0; j <= dh; ++j)
                        cur[i - dh + j] = ((cur[i - dh + j] - c * h[j]) % q + q) % q;
                }
            }
            rem = quo;
            fq_trim(rem);
            xq = fq_mulmod(xq, {1}, rem, q);  // re-reduce the Frobenius power
        }
    }
    return degrees;
}

// bitmask of achievable degree sums from a factor-degree multiset
uint64_t degree_mask(const std::vector<long>& degrees) {
    uint64_t m = 1;
    for (long r : degrees) m |= (m << r);
    return m;
}

mpz_class round_mpfr(mpfr_srcptr v) {
    mpz_class z;
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(v));
    mpfr_round(t, v);
    mpfr_get_z(z.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return z;
}

}  // namespace

std::vector<mpz_class> poly_primitive(std::vector<mpz_class> p) {
    long d = pdeg(p);
    if (d < 0) return {};
    p.resize(d + 1);
    mpz_class g = 0;
    for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 0) return {};
    if (p[d] < 0) g = -g;
    for (auto& c : p) c /= g;
    return p;
}

bigcomplex poly_eval_z(const std::vector<mpz_class>& p, const bigcomplex& z) {
    long prec = z.prec();
    bigcomplex acc(prec);
    for (long i = (long)p.size() - 1; i >= 0; --i) {
        acc = bc_mul(acc, z);
        if (p[i] != 0) acc = bc_add(acc, bc_from_q(mpq_class(p[i]), 0, prec));
    }
    return acc;
}

bool poly_irreducible(const std::vector<mpz_class>& p, long prec) {
    std::vector<mpz_class> f = poly_primitive(p);
    long d = pdeg(f);
    if (d <= 0) return false;
    if (d == 1) return true;

    // squarefree screen: a repeated factor shows up in gcd(f, f')
    {
        std::vector<mpq_class> a(f.begin(), f.end()), b;
        for (long i = 1; i <= d; ++i) b.emplace_back(i * f[i]);
        auto qdeg = [](const std::vector<mpq_class>& v) {
            long k = (long)v.size() - 1;
            while (k >= 0 && v[k] == 0) --k;
            return k;
        };
        while (qdeg(b) >= 0) {
            long da = qdeg(a), db = qdeg(b);
            for (long i = da; i >= db; --i) {
                if (a[i] == 0) continue;
                mpq_class q = a[i] / b[db];
                for (long j = 0; j <= db; ++j) a[i - db + j] -= q * b[j];
            }
            std::swap(a, b);
        }
        if (qdeg(a) > 0) return false;  // nonconstant gcd: square factor
    }

    static const long primes[] = {3,  5,  7,  11, 13, 17, 19, 23,
                                  29, 31, 37, 41, 43, 47, 53, 59};
    uint64_t middle = ((uint64_t(1) << d) - 2);  // bits 1..d-1
    uint64_t possible = ~uint64_t(0);
    int used = 0;
    for (long q : primes) {
        std::vector<long> degs = fq_factor_degrees(f, q);
        if (degs.empty()) continue;
        possible &= degree_mask(degs);
        if ((possible & middle) == 0) return true;
        if (++used >= 12) break;
    }

    // Degree patterns alone are inconclusive (e.g. polynomials reducible
    // modulo every prime). Round conjugation-closed root subsets to integer
    // candidate factors and settle by exact division.
    long probe = std::max(prec, 320L);
    std::vector<mpq_class> cf;
    cf.reserve(d + 1);
    for (long i = 0; i <= d; ++i) cf.emplace_back(f[i]);
    std::vector<bigcomplex> roots = poly_roots(cf, probe);
    long maxe = 0;
    for (const auto& z : roots) {
        bigfloat m = bc_abs_ub(z);
        if (mpfr_cmp_ui(m, 1) > 0) maxe = std::max(maxe, (long)mpfr_get_exp(m));
    }
    long wp = 2 * prec + 64 + maxe * d;
    if (wp > probe) roots = poly_roots(cf, wp);

    for (long k = 1; 2 * k <= d; ++k) {
        if (!((possible >> k) & 1)) continue;
        // enumerate k-subsets of the d roots
        std::vector<long> idx(k);
        for (long i = 0; i < k; ++i) idx[i] = i;
        double binom = 1;
        for (long i = 0; i < k; ++i) binom *= double(d - i) / double(i + 1);
        if (binom > 2e5) return false;  // enumeration budget exceeded
        while (true) {
            // monic product over the chosen roots, scaled by the leading term
            std::vector<bigcomplex> g;
            g.push_back(bc_from_q(mpq_class(f[d]), 0, wp));
            for (long i = 0; i < k; ++i) {
                const bigcomplex& z = roots[idx[i]];
                std::vector<bigcomplex> h(g.size() + 1, bigcomplex(wp));
                for (size_t j = 0; j < g.size(); ++j) {
                    h[j + 1] = bc_add(h[j + 1], g[j]);
                    h[j] = bc_sub(h[j], bc_mul(g[j], z));
                }
                g = h;
            }
            bool roundable = true;
            std::vector<mpz_class> cand(k + 1);
            for (long j = 0; j <= k && roundable; ++j) {
                // coefficient must be near-real and within 1/4 of an integer
                mpfr_t a;
                mpfr_init2(a, 64);
                mpfr_abs(a, g[j].im, MPFR_RNDU);
                mpfr_add(a, a, g[j].err, MPFR_RNDU);
                if (mpfr_cmp_d(a, 0.25) >= 0) roundable = false;
                if (roundable) {
                    cand[j] = round_mpfr(g[j].re);
                    mpfr_t diff;
                    mpfr_init2(diff, mpfr_get_prec(g[j].re));
                    mpfr_sub_z(diff, g[j].re, cand[j].get_mpz_t(), MPFR_RNDN);
                    mpfr_abs(diff, diff, MPFR_RNDU);
                    mpfr_add(diff, diff, g[j].err, MPFR_RNDU);
                    if (mpfr_cmp_d(diff, 0.25) >= 0) roundable = false;
                    mpfr_clear(diff);
                }
                mpfr_clear(a);
            }
            if (roundable) {
                std::vector<mpz_class> gp = poly_primitive(cand);
                if (pdeg(gp) == k && poly_divides(f, gp)) return false;
            }
            // next combination
            long i = k - 1;
            while (i >= 0 && idx[i] == d - k + i) --i;
            if (i < 0) break;
            ++idx[i];
            for (long j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return true;
}

algebraic_value recognize(const bigcomplex& z, const recog_config& cfg) {
    algebraic_value out;
    out.approx = z;
    long wp = cfg.prec + 64;
    bigcomplex zl = bc_at_prec(z, wp);

    // powers 1, z, z^2, ... at working precision
    std::vector<bigcomplex> pw;
    pw.push_back(bc_from_q(1, 0, wp));
    for (long i = 1; i <= cfg.maxdeg; ++i) pw.push_back(bc_mul(pw.back(), zl));

    mpfr_t sre, sim;
    mpfr_init2(sre, wp);
    mpfr_init2(sim, wp);
    for (long d = 1; d <= cfg.maxdeg; ++d) {
        zmat B(d + 1, d + 3);
        for (long i = 0; i <= d; ++i) {
            B.at(i, i) = 1;
            mpfr_mul_2si(sre, pw[i].re, cfg.prec - 16, MPFR_RNDN);
            mpfr_mul_2si(sim, pw[i].im, cfg.prec - 16, MPFR_RNDN);
            B.at(i, d + 1) = round_mpfr(sre);
            B.at(i, d + 2) = round_mpfr(sim);
        }
        lll_reduce(B);
        for (long r = 0; r <= d; ++r) {
            std::vector<mpz_class> c(d + 1);
            for (long i = 0; i <= d; ++i) c[i] = B.at(r, i);
            std::vector<mpz_class> cand = poly_primitive(c);
            if (pdeg(cand) < 1) continue;
            mpz_class h = 0;
            for (const auto& e : cand)
                if (abs(e) > h) h = abs(e);
            if (mpz_sizeinbase(h.get_mpz_t(), 2) > (size_t)cfg.heightbits) continue;
            // identifiability: a wrong candidate of this degree and height
            // evaluates no smaller than about H^-(d+1), so demand the
            // residual beat that margin and an absolute floor as well
            long hbits = (long)mpz_sizeinbase(h.get_mpz_t(), 2);
            long e = std::min(-(pdeg(cand) + 1) * hbits - 8, -(cfg.prec / 2));
            bigcomplex val = poly_eval_z(cand, zl);
            bigfloat ub = bc_abs_ub(val);
            if (mpfr_cmp_ui_2exp(ub, 1, e) >= 0) continue;
            if (!poly_irreducible(cand, cfg.prec)) continue;
            out.minpoly = cand;
            mpfr_clear(sre);
            mpfr_clear(sim);
            return out;
        }
    }
    mpfr_clear(sre);
    mpfr_clear(sim);
    return out;
}

bigcomplex qe_embed(const quad_field& F, const quad_elem& e, long prec) {
    // omega = (tr + sqrt(disc)) / 2 with disc < 0
    bigcomplex w(prec);
    mpfr_t s;
    mpfr_init2(s, prec);
    mpz_class ad = -F.disc;
    mpfr_set_z(s, ad.get_mpz_t(), MPFR_RNDN);
    mpfr_sqrt(s, s, MPFR_RNDN);
    mpfr_div_2ui(s, s, 1, MPFR_RNDN);
    mpfr_set(w.im, s, MPFR_RNDN);
    mpfr_set_q(w.re, mpq_class(F.omega_tr, 2).get_mpq_t(), MPFR_RNDN);
    mpfr_set_ui_2exp(w.err, 1, 2 - prec, MPFR_RNDU);  // sqrt rounding
    mpfr_clear(s);
    bigcomplex x = bc_from_q(e.x, 0, prec);
    return bc_add(x, bc_mul(bc_from_q(e.y, 0, prec), w));
}

std::optional<quad_elem> as_field_element(const quad_field& F,
                                          const algebraic_value& v) {
    if (!v.recognized()) return std::nullopt;
    long d = (long)v.minpoly.size() - 1;
    if (d == 1) {
        quad_elem e;
        e.x = mpq_class(-v.minpoly[0], v.minpoly[1]);
        mpq_canonicalize(e.x.get_mpq_t());
        e.y = 0;
        return e;
    }
    if (d != 2) return std::nullopt;
    mpz_class c0 = v.minpoly[0], c1 = v.minpoly[1], c2 = v.minpoly[2];
    mpz_class dp = c1 * c1 - 4 * c0 * c2;
    if (dp >= 0) return std::nullopt;  // real quadratic, not in K
    // dp must be disc * t^2 for rational t; here t is in fact an integer over
    // a square denominator, so test dp/disc for being a perfect square
    mpz_class ratio_num = dp / F.disc, rem = dp % F.disc;
    if (rem != 0) return std::nullopt;
    if (mpz_perfect_square_p(ratio_num.get_mpz_t()) == 0) return std::nullopt;
    mpz_class t;
    mpz_sqrt(t.get_mpz_t(), ratio_num.get_mpz_t());
    // roots: (-c1 +- t sqrt(disc)) / (2 c2), sqrt(disc) = 2 omega - tr
    for (int sgn : {1, -1}) {
        quad_elem e;
        mpz_class st = sgn * t;
        e.x = mpq_class(-c1 - st * F.omega_tr, 2 * c2);
        e.y = mpq_class(st, c2);
        mpq_canonicalize(e.x.get_mpq_t());
        mpq_canonicalize(e.y.get_mpq_t());
        // verify: X^2 - tr(e) X + nm(e) proportional to minpoly, and the
        // embedding lands inside the approximating ball
        mpq_class tr = qe_trace(F, e), nm = qe_norm(F, e);
        mpq_class r1(c1, c2), r0(c0, c2);
        mpq_canonicalize(r1.get_mpq_t());
        mpq_canonicalize(r0.get_mpq_t());
        if (r1 != -tr || r0 != nm) continue;
        bigcomplex img = qe_embed(F, e, v.approx.prec() + 32);
        bigfloat dist = bc_dist_ub(img, v.approx);
        bigfloat rad(64);
        mpfr_add(rad, img.err, v.approx.err, MPFR_RNDU);
        mpfr_mul_2ui(rad, rad, 2, MPFR_RNDU);
        if (mpfr_cmp(dist, rad) <= 0) return e;
    }
    return std::nullopt;
}

}  // namespace drwitt
