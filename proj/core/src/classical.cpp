#include "drwitt/classical.hpp"

#include <utility>
#include <vector>

namespace drwitt {

namespace {

// q-series run at this many guard bits over the requested precision
constexpr long guard = 96;

bigcomplex two_pi_i(long prec) {
    bigcomplex z(prec);
    mpfr_const_pi(z.im, MPFR_RNDN);
    mpfr_mul_2ui(z.im, z.im, 1, MPFR_RNDN);
    bc_widen_2exp(z, 3 - prec);  // 2 pi < 2^3, one ulp
    return z;
}

// certified lower bound for Im tau at error precision
bigfloat tau_im_lb(const bigcomplex& tau) {
    bigfloat v(64);
    mpfr_sub(v, tau.im, tau.err, MPFR_RNDD);
    return v;
}

void check_tau_floor(const bigcomplex& tau) {
    bigfloat v = tau_im_lb(tau);
    arg_check(mpfr_cmp_ui_2exp(v, 1, -3) > 0,
              "classical: Im tau below 1/8; reduce the basis first");
}

// sigma_p(1..n) by divisor sieve
std::vector<mpz_class> sigma_pows(long n, unsigned long p) {
    std::vector<mpz_class> s(n + 1, 0);
    for (long d = 1; d <= n; ++d) {
        mpz_class dp;
        mpz_ui_pow_ui(dp.get_mpz_t(), d, p);
        for (long m = d; m <= n; m += d) s[m] += dp;
    }
    return s;
}

// smallest n0 with C * sum_{n > n0} n^p b^n certified below 2^{-wp-4};
// b is a 64-bit upper bound on |q|, b < 1/2 required by the floor
long sigma_series_length(const bigfloat& b, long coefC, long p, long wp) {
    bigfloat lb2(64), t(64), u(64);
    mpfr_log2(lb2, b, MPFR_RNDU);  // negative; RNDU keeps b^n bounds valid
    for (long n = 4;; n += 1 + n / 16) {
        if (n > (1L << 20))
            throw std::invalid_argument(
                "classical: series budget exceeded; reduce tau first");
        // ratio of consecutive term bounds must be at most 1/2
        mpfr_set_si(t, n + 1, MPFR_RNDU);
        mpfr_div_si(t, t, n, MPFR_RNDU);
        mpfr_log2(t, t, MPFR_RNDU);
        mpfr_mul_si(t, t, p, MPFR_RNDU);
        mpfr_add(t, t, lb2, MPFR_RNDU);
        if (mpfr_cmp_si(t, -1) > 0) continue;
        // log2 of twice the first neglected term bound
        mpfr_set_si(t, coefC, MPFR_RNDU);
        mpfr_log2(t, t, MPFR_RNDU);
        mpfr_set_si(u, n + 1, MPFR_RNDU);
        mpfr_log2(u, u, MPFR_RNDU);
        mpfr_mul_si(u, u, p, MPFR_RNDU);
        mpfr_add(t, t, u, MPFR_RNDU);
        mpfr_mul_si(u, lb2, n + 1, MPFR_RNDU);
        mpfr_add(t, t, u, MPFR_RNDU);
        mpfr_add_si(t, t, 1, MPFR_RNDU);
        if (mpfr_cmp_si(t, -(wp + 4)) < 0) return n;
    }
}

// 1 + C sum_{n >= 1} sigma_p(n) q^n with a certified truncation widening
bigcomplex eis_sum(const bigcomplex& q, long coefC, unsigned long p, long wp) {
    bigfloat b = bc_abs_ub(q);
    // sigma_p(n) <= n^{p+1}
    long n0 = sigma_series_length(b, coefC < 0 ? -coefC : coefC, (long)p + 1, wp);
    auto s = sigma_pows(n0, p);
    bigcomplex acc = bc_from_q(1, 0, wp);
    bigcomplex qn = bc_from_q(1, 0, wp);
    for (long n = 1; n <= n0; ++n) {
        qn = bc_mul(qn, q);
        acc = bc_add(acc, bc_scale_q(mpq_class(coefC * s[n]), qn));
    }
    bc_widen_2exp(acc, -wp - 3);
    return acc;
}

// (2 pi)^12 q prod_{n >= 1} (1 - q^n)^24, tail applied as a relative widening
bigcomplex disc_eta(const bigcomplex& q, long wp) {
    bigfloat b = bc_abs_ub(q);
    arg_check(mpfr_cmp_d(b, 0.5) < 0,
              "classical: |q| too large; reduce tau first");
    bigfloat lb2(64), t(64);
    mpfr_log2(lb2, b, MPFR_RNDU);
    // 96 b^{n0+1} / (1 - b) < 2^{-wp-4}; b < 1/2 so 1/(1-b) < 2
    long n0 = 1;
    for (;; n0 += 1 + n0 / 16) {
        if (n0 > (1L << 20))
            throw std::invalid_argument(
                "classical: series budget exceeded; reduce tau first");
        mpfr_mul_si(t, lb2, n0 + 1, MPFR_RNDU);
        mpfr_add_si(t, t, 8, MPFR_RNDU);  // log2(96 * 2) < 8
        if (mpfr_cmp_si(t, -(wp + 4)) < 0) break;
    }
    bigcomplex one = bc_from_q(1, 0, wp);
    bigcomplex P = one;
    bigcomplex qn = one;
    for (long n = 1; n <= n0; ++n) {
        qn = bc_mul(qn, q);
        P = bc_mul(P, bc_pow_ui(bc_sub(one, qn), 24));
    }
    bigfloat a = bc_abs_ub(P);
    if (!mpfr_zero_p(a)) bc_widen_2exp(P, mpfr_get_exp(a) - wp - 3);
    bigcomplex tp = two_pi_i(wp);
    tp = bc_neg(bc_mul(tp, tp));  // (2 pi)^2
    return bc_mul(bc_pow_ui(tp, 6), bc_mul(q, P));
}

// subtract the nearest lattice translate m tau + n from z (midpoint estimate;
// the subtraction itself is an exact ball operation)
bigcomplex reduce_z(const bigcomplex& z, const bigcomplex& tau) {
    bigfloat a(64), r(64);
    mpfr_div(a, z.im, tau.im, MPFR_RNDN);
    mpz_class m, n;
    mpfr_get_z(m.get_mpz_t(), a, MPFR_RNDN);
    mpfr_mul(r, a, tau.re, MPFR_RNDN);
    mpfr_sub(r, z.re, r, MPFR_RNDN);
    mpfr_get_z(n.get_mpz_t(), r, MPFR_RNDN);
    bigcomplex out = z;
    if (m != 0) out = bc_sub(out, bc_scale_q(mpq_class(m), tau));
    if (n != 0) out = bc_sub(out, bc_from_q(mpq_class(n), 0, z.prec()));
    return out;
}

// cutoff n0 for the wp/wp' q-series: the neglected terms are bounded by
// (wu + 1/wl + 2) b^{n0+1} / (1 - b) * (1 + V) / (1 - V)^3 with
// V = b^{n0+1} max(wu, 1/wl); require that below 2^{-prec-16}
long wp_series_length(const bigfloat& b, const bigfloat& wu, const bigfloat& wl,
                      long prec) {
    arg_check(mpfr_sgn(wl) > 0, "weierstrass: argument ball touches zero");
    arg_check(mpfr_cmp_ui(b, 1) < 0,
              "classical: |q| too large; reduce tau first");
    bigfloat t(64), u(64), v(64), coef(64), wli(64);
    mpfr_ui_div(wli, 1, wl, MPFR_RNDU);
    mpfr_add(coef, wu, wli, MPFR_RNDU);
    mpfr_add_ui(coef, coef, 2, MPFR_RNDU);
    mpfr_ui_sub(t, 1, b, MPFR_RNDD);
    mpfr_div(coef, coef, t, MPFR_RNDU);
    for (long n = 1;; n += 1 + n / 16) {
        if (n > (1L << 20))
            throw std::invalid_argument(
                "classical: series budget exceeded; reduce tau first");
        mpfr_pow_ui(t, b, (unsigned long)(n + 1), MPFR_RNDU);
        mpfr_max(u, wu, wli, MPFR_RNDU);
        mpfr_mul(v, t, u, MPFR_RNDU);  // V
        if (mpfr_cmp_d(v, 0.75) >= 0) continue;
        mpfr_ui_sub(u, 1, v, MPFR_RNDD);
        mpfr_pow_ui(u, u, 3, MPFR_RNDD);
        mpfr_add_ui(v, v, 1, MPFR_RNDU);
        mpfr_div(v, v, u, MPFR_RNDU);
        mpfr_mul(v, v, coef, MPFR_RNDU);
        mpfr_mul(v, v, t, MPFR_RNDU);
        if (mpfr_cmp_si_2exp(v, 1, -(prec + 16)) < 0) return n;
    }
}

bigcomplex checked_div(const bigcomplex& num, const bigcomplex& den) {
    bigfloat l = bc_abs_lb(den);
    if (mpfr_sgn(l) <= 0)
        throw pole_error("weierstrass: argument within radius of a lattice point");
    return bc_div(num, den);
}

// F(v) = v / (1 - v)^2
bigcomplex lattice_f(const bigcomplex& one, const bigcomplex& v) {
    bigcomplex d = bc_sub(one, v);
    return checked_div(v, bc_mul(d, d));
}

// v F'(v) = v (1 + v) / (1 - v)^3
bigcomplex lattice_fp(const bigcomplex& one, const bigcomplex& v) {
    bigcomplex d = bc_sub(one, v);
    return checked_div(bc_mul(v, bc_add(one, v)), bc_pow_ui(d, 3));
}

struct wp_setup {
    bigcomplex q, w, one;
    long n0;
    bigfloat tail;  // raw tail bound before the (2 pi i)-power scaling
};

wp_setup wp_prepare(const bigcomplex& z, const bigcomplex& tau, long prec) {
    check_tau_floor(tau);
    long wpp = prec + guard;
    bigcomplex t = bc_at_prec(tau, wpp);
    bigcomplex zz = reduce_z(bc_at_prec(z, wpp), t);
    wp_setup s{bc_exp2pii(t), bc_exp2pii(zz), bc_from_q(1, 0, wpp), 0,
               bigfloat(64)};
    bigfloat b = bc_abs_ub(s.q);
    bigfloat wu = bc_abs_ub(s.w), wl = bc_abs_lb(s.w);
    s.n0 = wp_series_length(b, wu, wl, prec);
    mpfr_set_si_2exp(s.tail, 1, -(prec + 16), MPFR_RNDU);
    return s;
}

void add_err(bigcomplex& z, const bigfloat& e) {
    mpfr_add(z.err, z.err, e, MPFR_RNDU);
}

}  // namespace

bigcomplex bc_pi(long prec) {
    bigcomplex z(prec);
    mpfr_const_pi(z.re, MPFR_RNDN);
    bc_widen_2exp(z, 2 - prec);
    return z;
}

bigcomplex eisenstein_e4(const bigcomplex& tau, long prec) {
    check_tau_floor(tau);
    long wpp = prec + guard;
    return eis_sum(bc_exp2pii(bc_at_prec(tau, wpp)), 240, 3, wpp);
}

bigcomplex eisenstein_e6(const bigcomplex& tau, long prec) {
    check_tau_floor(tau);
    long wpp = prec + guard;
    return eis_sum(bc_exp2pii(bc_at_prec(tau, wpp)), -504, 5, wpp);
}

lattice_values lattice_values_at(const bigcomplex& tau, long prec) {
    check_tau_floor(tau);
    long wpp = prec + guard;
    bigcomplex q = bc_exp2pii(bc_at_prec(tau, wpp));
    bigcomplex tp = two_pi_i(wpp);
    bigcomplex tp2 = bc_neg(bc_mul(tp, tp));  // (2 pi)^2
    lattice_values lv;
    lv.g2 = bc_scale_q(mpq_class(1, 12),
                       bc_mul(bc_pow_ui(tp2, 2), eis_sum(q, 240, 3, wpp)));
    lv.g3 = bc_scale_q(mpq_class(1, 216),
                       bc_mul(bc_pow_ui(tp2, 3), eis_sum(q, -504, 5, wpp)));
    lv.disc = disc_eta(q, wpp);
    lv.j = bc_scale_q(1728, bc_div(bc_pow_ui(lv.g2, 3), lv.disc));
    return lv;
}

bigcomplex j_invariant(const bigcomplex& tau, long prec) {
    return lattice_values_at(tau, prec).j;
}

bigcomplex wp_value(const bigcomplex& z, const bigcomplex& tau, long prec) {
    wp_setup s = wp_prepare(z, tau, prec);
    bigcomplex acc = bc_add(bc_from_q(mpq_class(1, 12), 0, s.one.prec()),
                            lattice_f(s.one, s.w));
    bigcomplex qn = s.q;
    for (long n = 1; n <= s.n0; ++n) {
        bigcomplex fq = lattice_f(s.one, qn);
        acc = bc_add(acc, lattice_f(s.one, bc_mul(qn, s.w)));
        acc = bc_add(acc, lattice_f(s.one, checked_div(qn, s.w)));
        acc = bc_sub(acc, bc_add(fq, fq));
        qn = bc_mul(qn, s.q);
    }
    add_err(acc, s.tail);
    bigcomplex tp = two_pi_i(s.one.prec());
    return bc_mul(bc_mul(tp, tp), acc);
}

bigcomplex wp_prime_value(const bigcomplex& z, const bigcomplex& tau,
                          long prec) {
    wp_setup s = wp_prepare(z, tau, prec);
    bigcomplex acc = lattice_fp(s.one, s.w);
    bigcomplex qn = s.q;
    for (long n = 1; n <= s.n0; ++n) {
        acc = bc_add(acc, lattice_fp(s.one, bc_mul(qn, s.w)));
        acc = bc_sub(acc, lattice_fp(s.one, checked_div(qn, s.w)));
        qn = bc_mul(qn, s.q);
    }
    add_err(acc, s.tail);
    bigcomplex tp = two_pi_i(s.one.prec());
    return bc_mul(bc_pow_ui(tp, 3), acc);
}

void gauss_reduce(bigcomplex& a, bigcomplex& b) {
    bigcomplex s = bc_mul(a, bc_conj(b));
    arg_check(mpfr_cmpabs(s.im, s.err) > 0, "gauss_reduce: degenerate basis");
    if (mpfr_sgn(s.im) < 0) std::swap(a, b);
    bigfloat ra(64), rb(64);
    for (int iter = 0; iter < 4096; ++iter) {
        bigcomplex r = bc_div(a, b);
        mpz_class m;
        mpfr_get_z(m.get_mpz_t(), r.re, MPFR_RNDN);
        if (m != 0) a = bc_sub(a, bc_scale_q(mpq_class(m), b));
        mpfr_hypot(ra, a.re, a.im, MPFR_RNDN);
        mpfr_hypot(rb, b.re, b.im, MPFR_RNDN);
        if (mpfr_cmp(ra, rb) >= 0) return;
        bigcomplex t = std::move(a);  // (a, b) -> (b, -a): tau -> -1/tau
        a = b;
        b = bc_neg(t);
    }
    throw precision_error("gauss_reduce: no convergence");
}

weber_kind weber_kind_for(const quad_field& F) {
    if (F.disc == -4) return weber_kind::square;
    if (F.disc == -3) return weber_kind::cube;
    return weber_kind::generic;
}

bigcomplex weber_value(const bigcomplex& z, const bigcomplex& w1,
                       const bigcomplex& w2, weber_kind kind, long prec) {
    bigcomplex A = bc_at_prec(w1, prec + 64), B = bc_at_prec(w2, prec + 64);
    gauss_reduce(A, B);
    bigcomplex tau = bc_div(A, B);
    bigcomplex zn = bc_div(bc_at_prec(z, prec + 64), B);
    lattice_values lv = lattice_values_at(tau, prec);
    bigcomplex p = wp_value(zn, tau, prec);
    switch (kind) {
        case weber_kind::square:
            return bc_mul(bc_div(bc_mul(lv.g2, lv.g2), lv.disc), bc_mul(p, p));
        case weber_kind::cube:
            return bc_mul(bc_div(lv.g3, lv.disc), bc_pow_ui(p, 3));
        default:
            return bc_scale_q(
                mpq_class(-31104),  // -2^7 3^5
                bc_mul(bc_div(bc_mul(lv.g2, lv.g3), lv.disc), p));
    }
}

bigcomplex j_from_basis(const bigcomplex& w1, const bigcomplex& w2, long prec) {
    bigcomplex A = bc_at_prec(w1, prec + 64), B = bc_at_prec(w2, prec + 64);
    gauss_reduce(A, B);
    return j_invariant(bc_div(A, B), prec);
}

bigcomplex j_from_theta(const bigcomplex& tau, long prec) {
    long wpp = prec + 64;
    siegel_point sp;
    sp.g = 1;
    sp.tau = {bc_at_prec(tau, wpp)};
    std::vector<bigcomplex> zero(1, bigcomplex(wpp));
    bigcomplex th2 = theta(theta_char{{mpq_class(1, 2)}}, zero, sp, wpp);
    bigcomplex th3 = theta(theta_char{{mpq_class(0)}}, zero, sp, wpp);
    bigcomplex lam = bc_div(bc_pow_ui(th2, 4), bc_pow_ui(th3, 4));
    bigcomplex one = bc_from_q(1, 0, wpp);
    bigcomplex l2 = bc_mul(lam, lam);
    bigcomplex num = bc_add(bc_sub(l2, lam), one);
    bigcomplex den = bc_mul(l2, bc_pow_ui(bc_sub(one, lam), 2));
    return bc_scale_q(256, bc_div(bc_pow_ui(num, 3), den));
}

}  // namespace drwitt
