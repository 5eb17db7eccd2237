#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>

#include "drwitt/bigcomplex.hpp"

using namespace drwitt;

namespace {

// exact complex rational, the oracle arithmetic for ball containment checks
struct cq {
    mpq_class re, im;
};
cq cq_add(const cq& a, const cq& b) { return {a.re + b.re, a.im + b.im}; }
cq cq_sub(const cq& a, const cq& b) { return {a.re - b.re, a.im - b.im}; }
cq cq_mul(const cq& a, const cq& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
cq cq_div(const cq& a, const cq& b) {
    mpq_class n = b.re * b.re + b.im * b.im;
    cq t = cq_mul(a, {b.re, -b.im});
    return {t.re / n, t.im / n};
}

// does the ball z contain the exact point x?
bool contains(const bigcomplex& z, const cq& x) {
    bigfloat dr(512), di(512), d(512);
    mpfr_set_q(dr, x.re.get_mpq_t(), MPFR_RNDN);
    mpfr_sub(dr, dr, z.re, MPFR_RNDN);
    mpfr_set_q(di, x.im.get_mpq_t(), MPFR_RNDN);
    mpfr_sub(di, di, z.im, MPFR_RNDN);
    mpfr_hypot(d, dr, di, MPFR_RNDN);
    return mpfr_cmp(d, z.err) <= 0;
}

mpq_class rand_q(std::mt19937& rng) {
    std::uniform_int_distribution<long> num(-1000, 1000), den(1, 997);
    mpq_class q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

}  // namespace

TEST_CASE("construction and exactness") {
    bigcomplex z = bc_from_q(mpq_class(1, 2), mpq_class(-3, 4), 128);
    // dyadic rationals are represented exactly
    CHECK(mpfr_zero_p(z.err.v));
    CHECK(bc_err2exp(z) == bc_exact_exp);
    bigcomplex w = bc_from_q(mpq_class(1, 3), 0, 128);
    CHECK(!mpfr_zero_p(w.err.v));
    CHECK(bc_err2exp(w) < -125);
    CHECK(contains(w, {mpq_class(1, 3), 0}));
    bigcomplex d = bc_from_d(0.125, -2.0, 64);
    CHECK(mpfr_zero_p(d.err.v));
    CHECK(d.to_complex_d() == std::complex<double>(0.125, -2.0));
}

TEST_CASE("ring operations contain the exact value") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        cq a{rand_q(rng), rand_q(rng)}, b{rand_q(rng), rand_q(rng)};
        bigcomplex A = bc_from_q(a.re, a.im, 128), B = bc_from_q(b.re, b.im, 128);
        CHECK(contains(bc_add(A, B), cq_add(a, b)));
        CHECK(contains(bc_sub(A, B), cq_sub(a, b)));
        CHECK(contains(bc_mul(A, B), cq_mul(a, b)));
        CHECK(contains(bc_neg(A), {-a.re, -a.im}));
        CHECK(contains(bc_conj(A), {a.re, -a.im}));
        if (b.re != 0 || b.im != 0) {
            CHECK(contains(bc_div(A, B), cq_div(a, b)));
            CHECK(contains(bc_inv(B), cq_div({1, 0}, b)));
        }
        mpq_class s = rand_q(rng);
        CHECK(contains(bc_scale_q(s, A), {s * a.re, s * a.im}));
        cq p{1, 0};
        for (int k = 0; k < 7; ++k) p = cq_mul(p, a);
        CHECK(contains(bc_pow_ui(A, 7), p));
    }
}

TEST_CASE("error stays small through op chains") {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        cq x{rand_q(rng), rand_q(rng)};
        bigcomplex X = bc_from_q(x.re, x.im, 192);
        cq acc = x;
        bigcomplex Acc = X;
        for (int step = 0; step < 30; ++step) {
            cq y{rand_q(rng), rand_q(rng)};
            bigcomplex Y = bc_from_q(y.re, y.im, 192);
            switch (step % 3) {
                case 0:
                    acc = cq_add(acc, y);
                    Acc = bc_add(Acc, Y);
                    break;
                case 1:
                    acc = cq_mul(acc, y);
                    Acc = bc_mul(Acc, Y);
                    break;
                case 2:
                    acc = cq_sub(acc, cq_mul(y, y));
                    Acc = bc_sub(Acc, bc_mul(Y, Y));
                    break;
            }
            CHECK(contains(Acc, acc));
        }
        // magnitudes stay around 1000^30-ish = 2^300; error must stay within
        // a few hundred ulps of that scale
        CHECK(bc_err2exp(Acc) < 330 - 192 + 40);
    }
}

TEST_CASE("division by an uncertain zero is refused") {
    bigcomplex a = bc_from_q(1, 0, 64);
    bigcomplex z = bc_from_q(0, 0, 64);
    CHECK_THROWS_AS(bc_div(a, z), precision_error);
    bigcomplex tiny = bc_from_q(mpq_class(1, 1000), 0, 64);
    bc_widen_2exp(tiny, -2);  // radius 1/4 swallows the midpoint
    CHECK_THROWS_AS(bc_div(a, tiny), precision_error);
}

TEST_CASE("exp2pii anchors") {
    long p = 128;
    bigcomplex one = bc_exp2pii(bc_from_q(0, 0, p));
    CHECK(contains(one, {1, 0}));
    bigcomplex minus = bc_exp2pii(bc_from_q(mpq_class(1, 2), 0, p));
    CHECK(contains(minus, {-1, 0}));
    bigcomplex eye = bc_exp2pii(bc_from_q(mpq_class(1, 4), 0, p));
    CHECK(contains(eye, {0, 1}));
    CHECK(bc_err2exp(eye) < -p + 16);
    // e^{2 pi i (iy)} = e^{-2 pi y}, tested against mpfr directly
    bigcomplex dec = bc_exp2pii(bc_from_q(0, 1, p));
    bigfloat want(256);
    mpfr_const_pi(want, MPFR_RNDN);
    mpfr_mul_si(want, want, -2, MPFR_RNDN);
    mpfr_exp(want, want, MPFR_RNDN);
    bigfloat diff(256);
    mpfr_sub(diff, dec.re, want, MPFR_RNDN);
    mpfr_abs(diff, diff, MPFR_RNDN);
    CHECK(mpfr_cmp(diff, dec.err) <= 0);
    CHECK(mpfr_get_d(dec.im, MPFR_RNDN) == doctest::Approx(0.0).epsilon(1e-30));
}

TEST_CASE("exp2pii self-consistency across precision") {
    std::mt19937 rng(17);
    for (int trial = 0; trial < 30; ++trial) {
        cq z{rand_q(rng), rand_q(rng)};
        z.im /= 50;  // keep magnitudes sane
        bigcomplex lo = bc_exp2pii(bc_from_q(z.re, z.im, 128));
        bigcomplex hi = bc_exp2pii(bc_from_q(z.re, z.im, 512));
        // the high-precision midpoint must sit inside the low ball
        bigfloat dr(512), di(512), d(512);
        mpfr_sub(dr, lo.re, hi.re, MPFR_RNDN);
        mpfr_sub(di, lo.im, hi.im, MPFR_RNDN);
        mpfr_hypot(d, dr, di, MPFR_RNDN);
        CHECK(mpfr_cmp(d, lo.err) <= 0);
        // periodicity: shifting the real part by 1 changes nothing
        bigcomplex sh = bc_exp2pii(bc_from_q(z.re + 1, z.im, 128));
        CHECK(bc_close_2exp(lo, sh, std::max(bc_err2exp(lo), bc_err2exp(sh)) + 3));
    }
}

TEST_CASE("distance bound and closeness") {
    bigcomplex a = bc_from_q(mpq_class(1, 3), 2, 128);
    bigcomplex b = bc_from_q(mpq_class(1, 3), 2, 128);
    CHECK(bc_close_2exp(a, b, -120));
    bigcomplex c = bc_from_q(mpq_class(1, 3) + mpq_class(1, 1 << 20), 2, 128);
    CHECK(!bc_close_2exp(a, c, -30));
    CHECK(bc_close_2exp(a, c, -19));
    bigfloat d = bc_dist_ub(a, c);
    double dd = mpfr_get_d(d, MPFR_RNDN);
    CHECK(dd == doctest::Approx(1.0 / (1 << 20)).epsilon(1e-6));
}

TEST_CASE("printing respects certified accuracy") {
    bigcomplex z = bc_from_q(mpq_class(1, 3), 0, 256);
    std::string full = bc_dec_re(z);
    CHECK(full.size() > 60);  // ~77 digits at 256 bits
    bc_widen_2exp(z, -33);    // ~10 decimal digits remain certified
    std::string clipped = bc_dec_re(z);
    CHECK(clipped.size() < 16);
    CHECK(clipped.substr(0, 6) == "0.3333");
    // error larger than the value: nothing printable
    bigcomplex w = bc_from_q(mpq_class(1, 1000), 0, 64);
    bc_widen_2exp(w, 0);
    CHECK(bc_dec_re(w) == "0");
}

TEST_CASE("widening accumulates upward") {
    bigcomplex z = bc_from_q(1, 1, 64);
    bc_widen_2exp(z, -40);
    bc_widen_2exp(z, -40);
    // err = 2^{-39} exactly; the mpfr exponent convention puts it in
    // [2^{-39}, 2^{-38}), so the reported bound exponent is -38
    long e = bc_err2exp(z);
    CHECK(e == -38);
}
