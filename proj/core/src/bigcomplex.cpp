#include "drwitt/bigcomplex.hpp"

#include <algorithm>
#include <climits>

namespace drwitt {

namespace {

constexpr long err_prec = 32;

// accumulate rounding bounds: each correctly rounded op contributes at most
// one ulp of its own result, so ops * 2^(maxe - prec) covers the lot
struct rnd_track {
    long maxe = LONG_MIN;
    long ops = 0;
    void note(mpfr_srcptr x) {
        if (!mpfr_zero_p(x)) maxe = std::max(maxe, (long)mpfr_get_exp(x));
        ++ops;
    }
};

void err_add(mpfr_ptr e, mpfr_srcptr a) { mpfr_add(e, e, a, MPFR_RNDU); }

void err_add_2exp(mpfr_ptr e, long k) {
    bigfloat t(err_prec);
    mpfr_set_ui_2exp(t, 1, k, MPFR_RNDU);
    mpfr_add(e, e, t, MPFR_RNDU);
}

void err_add_rnd(bigcomplex& z, const rnd_track& r) {
    if (r.maxe == LONG_MIN || r.ops == 0) return;
    long bits = 1;
    while ((1L << bits) < r.ops + 1) ++bits;
    err_add_2exp(z.err, r.maxe - z.prec() + bits);
}

// |mid| upper/lower bounds at err precision with directed rounding
bigfloat mid_abs(const bigcomplex& a, mpfr_rnd_t rnd) {
    bigfloat r(err_prec), i(err_prec);
    mpfr_abs(r, a.re, rnd);
    mpfr_abs(i, a.im, rnd);
    bigfloat h(err_prec);
    mpfr_hypot(h, r, i, rnd);
    return h;
}

}  // namespace

bigfloat bf_from_q(const mpq_class& q, long prec) {
    bigfloat x(prec);
    mpfr_set_q(x, q.get_mpq_t(), MPFR_RNDN);
    return x;
}

mpq_class bf_to_q(mpfr_srcptr x) {
    if (mpfr_zero_p(x)) return 0;
    if (!mpfr_number_p(x)) throw precision_error("bf_to_q: non-finite value");
    mpz_class m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    mpq_class q(m);
    if (e >= 0) {
        mpz_class p2;
        mpz_ui_pow_ui(p2.get_mpz_t(), 2, (unsigned long)e);
        q *= p2;
    } else {
        mpz_class p2;
        mpz_ui_pow_ui(p2.get_mpz_t(), 2, (unsigned long)(-e));
        q /= p2;
    }
    q.canonicalize();
    return q;
}

bigcomplex::bigcomplex(long prec) : re(prec), im(prec), err(err_prec) {}

bigcomplex bc_zero(long prec) { return bigcomplex(prec); }

bigcomplex bc_from_q(const mpq_class& re, const mpq_class& im, long prec) {
    bigcomplex z(prec);
    int t1 = mpfr_set_q(z.re, re.get_mpq_t(), MPFR_RNDN);
    int t2 = mpfr_set_q(z.im, im.get_mpq_t(), MPFR_RNDN);
    rnd_track r;
    if (t1 != 0) r.note(z.re);
    if (t2 != 0) r.note(z.im);
    err_add_rnd(z, r);
    return z;
}

bigcomplex bc_from_d(double re, double im, long prec) {
    bigcomplex z(prec);
    mpfr_set_d(z.re, re, MPFR_RNDN);
    mpfr_set_d(z.im, im, MPFR_RNDN);
    if (prec < 53) {
        rnd_track r;
        r.note(z.re);
        r.note(z.im);
        err_add_rnd(z, r);
    }
    return z;
}

bigcomplex bc_at_prec(const bigcomplex& a, long prec) {
    bigcomplex z(prec);
    mpfr_set(z.re, a.re, MPFR_RNDN);
    mpfr_set(z.im, a.im, MPFR_RNDN);
    mpfr_set(z.err, a.err, MPFR_RNDU);
    if (prec < a.prec()) {
        rnd_track r;
        r.note(z.re);
        r.note(z.im);
        err_add_rnd(z, r);
    }
    return z;
}

bigcomplex bc_add(const bigcomplex& a, const bigcomplex& b) {
    long p = std::max(a.prec(), b.prec());
    bigcomplex z(p);
    mpfr_add(z.re, a.re, b.re, MPFR_RNDN);
    mpfr_add(z.im, a.im, b.im, MPFR_RNDN);
    mpfr_add(z.err, a.err, b.err, MPFR_RNDU);
    rnd_track r;
    r.note(z.re);
    r.note(z.im);
    err_add_rnd(z, r);
    return z;
}

bigcomplex bc_sub(const bigcomplex& a, const bigcomplex& b) {
    long p = std::max(a.prec(), b.prec());
    bigcomplex z(p);
    mpfr_sub(z.re, a.re, b.re, MPFR_RNDN);
    mpfr_sub(z.im, a.im, b.im, MPFR_RNDN);
    mpfr_add(z.err, a.err, b.err, MPFR_RNDU);
    rnd_track r;
    r.note(z.re);
    r.note(z.im);
    err_add_rnd(z, r);
    return z;
}

bigcomplex bc_neg(const bigcomplex& a) {
    bigcomplex z(a.prec());
    mpfr_neg(z.re, a.re, MPFR_RNDN);
    mpfr_neg(z.im, a.im, MPFR_RNDN);
    mpfr_set(z.err, a.err, MPFR_RNDU);
    return z;
}

bigcomplex bc_conj(const bigcomplex& a) {
    bigcomplex z(a.prec());
    mpfr_set(z.re, a.re, MPFR_RNDN);
    mpfr_neg(z.im, a.im, MPFR_RNDN);
    mpfr_set(z.err, a.err, MPFR_RNDU);
    return z;
}

bigcomplex bc_mul(const bigcomplex& a, const bigcomplex& b) {
    long p = std::max(a.prec(), b.prec());
    bigcomplex z(p);
    rnd_track r;
    bigfloat t1(p), t2(p);
    mpfr_mul(t1, a.re, b.re, MPFR_RNDN);
    r.note(t1);
    mpfr_mul(t2, a.im, b.im, MPFR_RNDN);
    r.note(t2);
    mpfr_sub(z.re, t1, t2, MPFR_RNDN);
    r.note(z.re);
    mpfr_mul(t1, a.re, b.im, MPFR_RNDN);
    r.note(t1);
    mpfr_mul(t2, a.im, b.re, MPFR_RNDN);
    r.note(t2);
    mpfr_add(z.im, t1, t2, MPFR_RNDN);
    r.note(z.im);
    // |z1 z2 - m1 m2| <= |m1| e2 + |m2| e1 + e1 e2
    bigfloat A = mid_abs(a, MPFR_RNDU), B = mid_abs(b, MPFR_RNDU);
    bigfloat t(err_prec);
    mpfr_mul(t, A, b.err, MPFR_RNDU);
    err_add(z.err, t);
    mpfr_mul(t, B, a.err, MPFR_RNDU);
    err_add(z.err, t);
    mpfr_mul(t, a.err, b.err, MPFR_RNDU);
    err_add(z.err, t);
    err_add_rnd(z, r);
    return z;
}

bigcomplex bc_div(const bigcomplex& a, const bigcomplex& b) {
    long p = std::max(a.prec(), b.prec());
    bigfloat Bl = mid_abs(b, MPFR_RNDD);
    // certified denominator separation from zero
    bigfloat L(err_prec);
    mpfr_sub(L, Bl, b.err, MPFR_RNDD);
    if (mpfr_sgn(L.v) <= 0)
        throw precision_error("bc_div: denominator not separated from zero");
    bigcomplex z(p);
    rnd_track r;
    bigfloat den(p), t1(p), t2(p), num(p);
    mpfr_mul(t1, b.re, b.re, MPFR_RNDN);
    r.note(t1);
    mpfr_mul(t2, b.im, b.im, MPFR_RNDN);
    r.note(t2);
    mpfr_add(den, t1, t2, MPFR_RNDN);
    r.note(den);
    mpfr_mul(t1, a.re, b.re, MPFR_RNDN);
    r.note(t1);
    mpfr_mul(t2, a.im, b.im, MPFR_RNDN);
    r.note(t2);
    mpfr_add(num, t1, t2, MPFR_RNDN);
    r.note(num);
    mpfr_div(z.re, num, den, MPFR_RNDN);
    r.note(z.re);
    mpfr_mul(t1, a.im, b.re, MPFR_RNDN);
    r.note(t1);
    mpfr_mul(t2, a.re, b.im, MPFR_RNDN);
    r.note(t2);
    mpfr_sub(num, t1, t2, MPFR_RNDN);
    r.note(num);
    mpfr_div(z.im, num, den, MPFR_RNDN);
    r.note(z.im);
    // |t1/t2 - m1/m2| = |e1 m2 - m1 e2| / |t2 m2| <= (e1 |m2| + |m1| e2)/(L |m2|)
    bigfloat Au = mid_abs(a, MPFR_RNDU), Bu = mid_abs(b, MPFR_RNDU);
    bigfloat num_e(err_prec), t(err_prec);
    mpfr_mul(num_e, a.err, Bu, MPFR_RNDU);
    mpfr_mul(t, Au, b.err, MPFR_RNDU);
    mpfr_add(num_e, num_e, t, MPFR_RNDU);
    mpfr_mul(t, L, Bl, MPFR_RNDD);
    if (mpfr_sgn(t.v) <= 0) throw precision_error("bc_div: denominator underflow");
    mpfr_div(num_e, num_e, t, MPFR_RNDU);
    err_add(z.err, num_e);
    err_add_rnd(z, r);
    return z;
}

bigcomplex bc_inv(const bigcomplex& a) {
    bigcomplex one = bc_from_q(1, 0, a.prec());
    return bc_div(one, a);
}

bigcomplex bc_scale_q(const mpq_class& q, const bigcomplex& a) {
    bigcomplex z(a.prec());
    rnd_track r;
    int t1 = mpfr_mul_q(z.re, a.re, q.get_mpq_t(), MPFR_RNDN);
    if (t1 != 0) r.note(z.re);
    int t2 = mpfr_mul_q(z.im, a.im, q.get_mpq_t(), MPFR_RNDN);
    if (t2 != 0) r.note(z.im);
    bigfloat qa(err_prec);
    mpfr_set_q(qa, q.get_mpq_t(), MPFR_RNDU);
    mpfr_abs(qa, qa, MPFR_RNDU);
    mpfr_mul(z.err, a.err, qa, MPFR_RNDU);
    err_add_rnd(z, r);
    return z;
}

bigcomplex bc_pow_ui(const bigcomplex& a, unsigned long n) {
    bigcomplex z = bc_from_q(1, 0, a.prec());
    bigcomplex base = a;
    while (n) {
        if (n & 1) z = bc_mul(z, base);
        n >>= 1;
        if (n) base = bc_mul(base, base);
    }
    return z;
}

bigcomplex bc_exp2pii(const bigcomplex& z) {
    long p = z.prec();
    bigcomplex w(p);
    bigfloat pi(p), tx(p), ty(p), s(p), c(p), mag(p);
    mpfr_const_pi(pi, MPFR_RNDN);
    mpfr_mul(tx, pi, z.re, MPFR_RNDN);
    mpfr_mul_2si(tx, tx, 1, MPFR_RNDN);  // 2 pi x
    mpfr_mul(ty, pi, z.im, MPFR_RNDN);
    mpfr_mul_2si(ty, ty, 1, MPFR_RNDN);  // 2 pi y
    mpfr_sin_cos(s, c, tx, MPFR_RNDN);
    mpfr_neg(ty, ty, MPFR_RNDN);
    mpfr_exp(mag, ty, MPFR_RNDN);  // e^{-2 pi y}
    mpfr_mul(w.re, mag, c, MPFR_RNDN);
    mpfr_mul(w.im, mag, s, MPFR_RNDN);

    // magnitude upper bound with the input radius folded in:
    // |e^{2 pi i z'}| <= e^{-2 pi (y - err)}
    bigfloat yl(err_prec), Mu(err_prec);
    mpfr_set(yl, z.im, MPFR_RNDD);
    mpfr_sub(yl, yl, z.err, MPFR_RNDD);
    bigfloat two_pi_u(err_prec);
    mpfr_const_pi(two_pi_u, MPFR_RNDU);
    mpfr_mul_2si(two_pi_u, two_pi_u, 1, MPFR_RNDU);
    mpfr_mul(Mu, two_pi_u, yl, MPFR_RNDD);
    mpfr_neg(Mu, Mu, MPFR_RNDU);
    mpfr_exp(Mu, Mu, MPFR_RNDU);

    bigfloat eighth(err_prec);
    mpfr_set_ui_2exp(eighth, 1, -3, MPFR_RNDN);
    if (mpfr_cmp(z.err.v, eighth.v) > 0) {
        // crude containment: distance to midpoint at most |true| + |mid|
        bigfloat mm(err_prec);
        mpfr_abs(mm, mag, MPFR_RNDU);
        mpfr_add(w.err, Mu, mm, MPFR_RNDU);
        return w;
    }
    // input radius: |e^{2 pi i z'} - e^{2 pi i z}| <= M (e^{2 pi e} - 1) <= 8 M e
    bigfloat t(err_prec);
    mpfr_mul(t, Mu, z.err, MPFR_RNDU);
    mpfr_mul_ui(t, t, 8, MPFR_RNDU);
    err_add(w.err, t);
    // rounding: the argument roundings enter sin/cos/exp with derivative <= 1
    // (after scaling by the magnitude), own roundings are half-ulp each
    long kx = mpfr_zero_p(tx.v) ? 0 : std::max(0L, (long)mpfr_get_exp(tx.v));
    long ky = mpfr_zero_p(ty.v) ? 0 : std::max(0L, (long)mpfr_get_exp(ty.v));
    long kappa = std::max(kx, ky);
    bigfloat rb(err_prec);
    mpfr_set_ui_2exp(rb, 1, kappa - p + 5, MPFR_RNDU);
    mpfr_mul(rb, rb, Mu, MPFR_RNDU);
    err_add(w.err, rb);
    return w;
}

void bc_widen_2exp(bigcomplex& z, long e) { err_add_2exp(z.err, e); }

bigfloat bc_abs_ub(const bigcomplex& a) {
    bigfloat m = mid_abs(a, MPFR_RNDU);
    mpfr_add(m, m, a.err, MPFR_RNDU);
    return m;
}

bigfloat bc_abs_lb(const bigcomplex& a) {
    bigfloat m = mid_abs(a, MPFR_RNDD);
    mpfr_sub(m, m, a.err, MPFR_RNDD);
    if (mpfr_sgn(m.v) < 0) mpfr_set_zero(m, 1);
    return m;
}

bigfloat bc_dist_ub(const bigcomplex& a, const bigcomplex& b) {
    bigfloat dr(err_prec), di(err_prec), d(err_prec);
    mpfr_sub(dr, a.re, b.re, MPFR_RNDA);
    mpfr_sub(di, a.im, b.im, MPFR_RNDA);
    mpfr_hypot(d, dr, di, MPFR_RNDU);
    mpfr_add(d, d, a.err, MPFR_RNDU);
    mpfr_add(d, d, b.err, MPFR_RNDU);
    return d;
}

bool bc_close_2exp(const bigcomplex& a, const bigcomplex& b, long e) {
    bigfloat d = bc_dist_ub(a, b);
    bigfloat t(err_prec);
    mpfr_set_ui_2exp(t, 1, e, MPFR_RNDD);
    return mpfr_cmp(d.v, t.v) <= 0;
}

long bc_err2exp(const bigcomplex& a) {
    if (mpfr_zero_p(a.err.v)) return bc_exact_exp;
    return (long)mpfr_get_exp(a.err);  // err < 2^exp
}

std::string bc_dec(mpfr_srcptr x, long err2exp) {
    if (mpfr_zero_p(x)) return "0";
    long e = mpfr_get_exp(x);
    long good_bits;
    if (err2exp == bc_exact_exp)
        good_bits = mpfr_get_prec(x);
    else
        good_bits = e - err2exp;
    if (good_bits <= 0) return "0";
    long digits = std::max(1L, (long)(good_bits * 0.30103) + 1);
    char* s = nullptr;
    mpfr_asprintf(&s, "%.*Rg", (int)digits, x);
    std::string out(s);
    mpfr_free_str(s);
    return out;
}

std::string bc_dec_re(const bigcomplex& a) { return bc_dec(a.re, bc_err2exp(a)); }
std::string bc_dec_im(const bigcomplex& a) { return bc_dec(a.im, bc_err2exp(a)); }

}  // namespace drwitt
