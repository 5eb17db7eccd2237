#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "drwitt/classical.hpp"
#include "drwitt/quadfield.hpp"

using namespace drwitt;

namespace {

bigcomplex tau_d(double x, double y, long prec) { return bc_from_d(x, y, prec); }

// i * sqrt(n) as a one-ulp ball
bigcomplex tau_sqrt(unsigned long n, long prec) {
    bigcomplex t(prec);
    mpfr_sqrt_ui(t.im, n, MPFR_RNDN);
    bc_widen_2exp(t, mpfr_get_exp(t.im) - prec + 1);
    return t;
}

// (1 + i sqrt(n)) / 2
bigcomplex tau_half_sqrt(unsigned long n, long prec) {
    bigcomplex t = tau_sqrt(n, prec);
    t = bc_scale_q(mpq_class(1, 2), t);
    return bc_add(t, bc_from_q(mpq_class(1, 2), 0, prec));
}

// lemniscatic period 2 integral_0^1 dt/sqrt(1-t^4) = Gamma(1/4)^2 / (2 sqrt(2 pi))
bigcomplex lemniscate_const(long prec) {
    bigfloat g(prec), p(prec), v(prec);
    mpfr_set_ui(g, 1, MPFR_RNDN);
    mpfr_div_ui(g, g, 4, MPFR_RNDN);
    mpfr_gamma(g, g, MPFR_RNDN);
    mpfr_const_pi(p, MPFR_RNDN);
    mpfr_mul_2ui(p, p, 1, MPFR_RNDN);
    mpfr_sqrt(p, p, MPFR_RNDN);
    mpfr_mul(v, g, g, MPFR_RNDN);
    mpfr_div(v, v, p, MPFR_RNDN);
    mpfr_div_2ui(v, v, 1, MPFR_RNDN);
    bigcomplex z(prec);
    mpfr_set(z.re, v, MPFR_RNDN);
    bc_widen_2exp(z, 2 - prec + 4);
    return z;
}

double cabs(const bigcomplex& z) { return std::abs(z.to_complex_d()); }

double mid_dist(const bigcomplex& a, const bigcomplex& b) {
    return std::abs(a.to_complex_d() - b.to_complex_d());
}

// double-precision Eisenstein lattice sums over |m|,|n| <= R
std::complex<double> lattice_g(const std::complex<double>& tau, int weight,
                               int R) {
    std::complex<double> s = 0;
    for (int m = -R; m <= R; ++m)
        for (int n = -R; n <= R; ++n) {
            if (m == 0 && n == 0) continue;
            std::complex<double> w = double(m) * tau + double(n);
            s += 1.0 / std::pow(w, weight);
        }
    return s * (weight == 4 ? 60.0 : 140.0);
}

// Laurent coefficients of p(z): c1 = g2/20, c2 = g3/28,
// c_k = 3 / ((2k+3)(k-2)) sum_{m=1}^{k-2} c_m c_{k-1-m}
std::vector<bigcomplex> laurent_coeffs(const bigcomplex& g2,
                                       const bigcomplex& g3, long K) {
    std::vector<bigcomplex> c(K + 1, bigcomplex(g2.prec()));
    c[1] = bc_scale_q(mpq_class(1, 20), g2);
    c[2] = bc_scale_q(mpq_class(1, 28), g3);
    for (long k = 3; k <= K; ++k) {
        bigcomplex s(g2.prec());
        for (long m = 1; m <= k - 2; ++m) s = bc_add(s, bc_mul(c[m], c[k - 1 - m]));
        c[k] = bc_scale_q(mpq_class(3, (2 * k + 3) * (k - 2)), s);
    }
    return c;
}

}  // namespace

TEST_CASE("square lattice: g2 = 4 lemniscate^4, g3 = 0, half-period values") {
    long prec = 192;
    bigcomplex i1 = tau_d(0, 1, prec);
    lattice_values lv = lattice_values_at(i1, prec);

    bigcomplex pi4 = bc_pow_ui(lemniscate_const(prec + 64), 4);
    CHECK(bc_close_2exp(lv.g2, bc_scale_q(4, pi4), -prec + 8));
    CHECK(cabs(lv.g3) < 1e-40);
    CHECK(mpfr_cmp_d(bc_abs_ub(lv.g3), 1e-40) < 0);

    // e-values of y^2 = 4x^3 - g2 x: p(1/2) = w^2, p(i/2) = -w^2, p((1+i)/2) = 0
    bigcomplex w2 = bc_pow_ui(lemniscate_const(prec + 64), 2);
    bigcomplex e1 = wp_value(bc_from_q(mpq_class(1, 2), 0, prec), i1, prec);
    bigcomplex e3 = wp_value(bc_from_q(0, mpq_class(1, 2), prec), i1, prec);
    bigcomplex e2 = wp_value(bc_from_q(mpq_class(1, 2), mpq_class(1, 2), prec),
                             i1, prec);
    CHECK(bc_close_2exp(e1, w2, -prec + 8));
    CHECK(bc_close_2exp(e3, bc_neg(w2), -prec + 8));
    CHECK(mpfr_cmp_d(bc_abs_ub(e2), 1e-40) < 0);
}

TEST_CASE("double-precision lattice sums pin g2 and g3") {
    long prec = 96;
    for (std::complex<double> t : {std::complex<double>(0, 1),
                                   std::complex<double>(0.3, 1.2)}) {
        lattice_values lv = lattice_values_at(tau_d(t.real(), t.imag(), prec), prec);
        std::complex<double> s2 = lattice_g(t, 4, 120);
        std::complex<double> s3 = lattice_g(t, 6, 120);
        CHECK(std::abs(lv.g2.to_complex_d() - s2) < 3e-2 * std::abs(s2) + 1e-3);
        CHECK(std::abs(lv.g3.to_complex_d() - s3) < 1e-4 * std::abs(s3) + 1e-6);
    }
}

TEST_CASE("Laurent expansion of p and p' around zero") {
    long prec = 128;
    for (std::complex<double> t : {std::complex<double>(0, 1),
                                   std::complex<double>(0.3, 1.1)}) {
        bigcomplex tau = tau_d(t.real(), t.imag(), prec);
        lattice_values lv = lattice_values_at(tau, prec);
        auto c = laurent_coeffs(lv.g2, lv.g3, 120);
        bigcomplex z = bc_from_q(mpq_class(23, 100), mpq_class(11, 100), prec + 64);
        bigcomplex z2 = bc_mul(z, z);

        bigcomplex sp = bc_inv(z2);  // 1/z^2 + sum c_k z^{2k}
        bigcomplex spp = bc_scale_q(-2, bc_inv(bc_mul(z2, z)));
        bigcomplex zp = z2;
        for (long k = 1; k <= 120; ++k) {
            sp = bc_add(sp, bc_mul(c[k], zp));
            // d/dz of c_k z^{2k}
            spp = bc_add(spp, bc_scale_q(2 * k, bc_mul(c[k], bc_div(zp, z))));
            zp = bc_mul(zp, z2);
        }
        CHECK(bc_close_2exp(wp_value(z, tau, prec), sp, -64));
        CHECK(bc_close_2exp(wp_prime_value(z, tau, prec), spp, -64));
    }
}

TEST_CASE("differential equation, parity, and periodicity of p") {
    long prec = 160;
    std::mt19937 rng(517);
    std::uniform_real_distribution<double> xr(-0.45, 0.45), yr(0.9, 1.6),
        zr(-0.4, 0.4);
    for (int trial = 0; trial < 5; ++trial) {
        bigcomplex tau = tau_d(xr(rng), yr(rng), prec);
        bigcomplex z = bc_from_d(zr(rng) + 0.1, zr(rng) + 0.12, prec);
        lattice_values lv = lattice_values_at(tau, prec);
        bigcomplex p = wp_value(z, tau, prec);
        bigcomplex dp = wp_prime_value(z, tau, prec);
        bigcomplex lhs = bc_mul(dp, dp);
        bigcomplex rhs = bc_sub(bc_scale_q(4, bc_pow_ui(p, 3)),
                                bc_add(bc_mul(lv.g2, p), lv.g3));
        CHECK(bc_close_2exp(lhs, rhs, -prec + 30));

        CHECK(bc_close_2exp(wp_value(bc_neg(z), tau, prec), p, -prec + 20));
        CHECK(bc_close_2exp(wp_prime_value(bc_neg(z), tau, prec), bc_neg(dp),
                            -prec + 20));

        bigcomplex moved = bc_add(z, bc_sub(bc_scale_q(3, tau),
                                            bc_from_q(2, 0, prec)));
        CHECK(bc_close_2exp(wp_value(moved, tau, prec), p, -prec + 20));
    }
}

TEST_CASE("j at complex multiplication points takes the known values") {
    long prec = 256;
    CHECK(bc_close_2exp(j_invariant(tau_d(0, 1, prec), prec),
                        bc_from_q(1728, 0, prec), -prec + 16));
    CHECK(bc_close_2exp(j_invariant(tau_half_sqrt(3, prec), prec),
                        bigcomplex(prec), -prec + 16));
    CHECK(bc_close_2exp(j_invariant(tau_d(0, 2, prec), prec),
                        bc_from_q(287496, 0, prec), -prec + 32));
    CHECK(bc_close_2exp(j_invariant(tau_sqrt(2, prec), prec),
                        bc_from_q(8000, 0, prec), -prec + 32));
    CHECK(bc_close_2exp(j_invariant(tau_half_sqrt(7, prec), prec),
                        bc_from_q(-3375, 0, prec), -prec + 32));

    // disc -20: j(i sqrt 5) is a root of x^2 - 1264000 x - 681472000
    bigcomplex j5 = j_invariant(tau_sqrt(5, prec), prec);
    bigcomplex res = bc_sub(bc_mul(j5, j5),
                            bc_add(bc_scale_q(1264000, j5),
                                   bc_from_q(681472000, 0, prec)));
    CHECK(bc_close_2exp(res, bigcomplex(prec), -prec + 72));
}

TEST_CASE("Eisenstein series vanish at their complex multiplication points") {
    long prec = 160;
    CHECK(mpfr_cmp_d(bc_abs_ub(eisenstein_e6(tau_d(0, 1, prec), prec)), 1e-40) <
          0);
    CHECK(mpfr_cmp_d(bc_abs_ub(eisenstein_e4(tau_half_sqrt(3, prec), prec)),
                     1e-40) < 0);
}

TEST_CASE("eta-product discriminant equals g2^3 - 27 g3^2") {
    long prec = 128;
    for (std::complex<double> t : {std::complex<double>(0, 1),
                                   std::complex<double>(-0.23, 1.31),
                                   std::complex<double>(0.41, 0.93)}) {
        lattice_values lv = lattice_values_at(tau_d(t.real(), t.imag(), prec), prec);
        bigcomplex rhs = bc_sub(bc_pow_ui(lv.g2, 3),
                                bc_scale_q(27, bc_pow_ui(lv.g3, 2)));
        CHECK(bc_close_2exp(lv.disc, rhs, -prec + 40));
    }
}

TEST_CASE("independent q-expansion oracle reproduces j") {
    long prec = 256;
    long wp = prec + 64;
    bigcomplex tau = tau_d(0.1, 1.3, wp);
    bigcomplex q = bc_exp2pii(tau);
    // E4, E6 by the double divisor sum sum_d sum_m d^p q^{dm}, 50 q-terms
    bigcomplex e4 = bc_from_q(1, 0, wp), e6 = bc_from_q(1, 0, wp);
    for (long d = 1; d <= 50; ++d)
        for (long m = 1; d * m <= 50; ++m) {
            bigcomplex qdm = bc_pow_ui(q, (unsigned long)(d * m));
            e4 = bc_add(e4, bc_scale_q(240 * mpz_class(d) * d * d, qdm));
            e6 = bc_sub(e6, bc_scale_q(504 * mpz_class(d) * d * d * d * d, qdm));
        }
    bigcomplex e43 = bc_pow_ui(e4, 3);
    bigcomplex jo = bc_scale_q(
        1728, bc_div(e43, bc_sub(e43, bc_pow_ui(e6, 2))));
    CHECK(bc_close_2exp(j_invariant(tau, prec), jo, -prec + 56));
}

TEST_CASE("theta-null quotient route to j agrees with the q-expansion route") {
    long prec = 128;
    CHECK(bc_close_2exp(j_from_theta(tau_d(0, 1, prec), prec),
                        bc_from_q(1728, 0, prec), -prec + 16));
    bigcomplex tau = tau_d(0.31, 1.4, prec);
    CHECK(bc_close_2exp(j_from_theta(tau, prec), j_invariant(tau, prec),
                        -prec + 16));
}

TEST_CASE("normalized coordinates: exact torsion values and the field cases") {
    long prec = 128;
    CHECK(weber_kind_for(quad_field::create(1)) == weber_kind::square);
    CHECK(weber_kind_for(quad_field::create(3)) == weber_kind::cube);
    CHECK(weber_kind_for(quad_field::create(2)) == weber_kind::generic);
    CHECK(weber_kind_for(quad_field::create(5)) == weber_kind::generic);
    CHECK(weber_kind_for(quad_field::create(7)) == weber_kind::generic);

    // square kind on Z[i]: value 1/4 at both real and imaginary half-periods,
    // 0 at the middle one (disc = g2^3 there)
    bigcomplex w1 = tau_d(0, 1, prec), w2 = bc_from_q(1, 0, prec);
    bigcomplex q14 = bc_from_q(mpq_class(1, 4), 0, prec);
    CHECK(bc_close_2exp(weber_value(bc_from_q(mpq_class(1, 2), 0, prec), w1, w2,
                                    weber_kind::square, prec),
                        q14, -prec + 16));
    CHECK(bc_close_2exp(weber_value(bc_from_q(0, mpq_class(1, 2), prec), w1, w2,
                                    weber_kind::square, prec),
                        q14, -prec + 16));
    CHECK(mpfr_cmp_d(
              bc_abs_ub(weber_value(
                  bc_from_q(mpq_class(1, 2), mpq_class(1, 2), prec), w1, w2,
                  weber_kind::square, prec)),
              1e-30) < 0);

    // cube kind on Z[rho]: every 2-torsion value is -1/108 (4 e^3 = g3)
    bigcomplex rho = tau_half_sqrt(3, prec);
    bigcomplex m108 = bc_from_q(mpq_class(-1, 108), 0, prec);
    for (int c : {0, 1, 2}) {
        bigcomplex z = bc_scale_q(mpq_class(1, 2),
                                  c == 0 ? bc_from_q(1, 0, prec)
                                  : c == 1 ? rho
                                           : bc_add(rho, bc_from_q(1, 0, prec)));
        CHECK(bc_close_2exp(weber_value(z, rho, bc_from_q(1, 0, prec),
                                        weber_kind::cube, prec),
                            m108, -prec + 16));
    }

    // the generic kind degenerates on Z[i] (g3 = 0): the case split is needed
    CHECK(mpfr_cmp_d(
              bc_abs_ub(weber_value(bc_from_q(mpq_class(1, 2), 0, prec), w1, w2,
                                    weber_kind::generic, prec)),
              1e-30) < 0);
}

TEST_CASE("normalized coordinates are invariant under lattice scaling") {
    long prec = 128;
    bigcomplex w1 = tau_d(0.2, 1.3, prec), w2 = bc_from_q(1, 0, prec);
    bigcomplex z = bc_from_d(0.37, 0.21, prec);
    bigcomplex c = bc_from_d(1.3, -0.7, prec);
    for (weber_kind kind :
         {weber_kind::generic, weber_kind::square, weber_kind::cube}) {
        bigcomplex a = weber_value(z, w1, w2, kind, prec);
        bigcomplex b = weber_value(bc_mul(c, z), bc_mul(c, w1), bc_mul(c, w2),
                                   kind, prec);
        CHECK(bc_close_2exp(a, b, -prec + 24));
    }
}

TEST_CASE("basis reduction: orientation, ideal bases, class polynomial") {
    long prec = 192;
    // wrong orientation is repaired
    bigcomplex a = bc_from_q(1, 0, prec), b = tau_d(0, 1, prec);
    gauss_reduce(a, b);
    bigcomplex r = bc_div(a, b);
    CHECK(r.to_complex_d().imag() > 0);

    // a colinear pair is rejected
    bigcomplex c = bc_from_d(1, 2, prec), d = bc_from_d(2, 4, prec);
    CHECK_THROWS_AS(gauss_reduce(c, d), std::invalid_argument);

    // the principal ideal (2+i) of Z[i] is homothetic to Z[i]
    CHECK(bc_close_2exp(j_from_basis(bc_from_q(5, 0, prec),
                                     bc_from_q(2, 1, prec), prec),
                        bc_from_q(1728, 0, prec), -prec + 16));

    // the two ideal classes of Q(sqrt(-5)) give the two roots of the
    // disc -20 class polynomial x^2 - 1264000 x - 681472000
    bigcomplex j1 = j_invariant(tau_sqrt(5, prec), prec);
    bigcomplex j2 = j_from_basis(bc_from_q(2, 0, prec),
                                 bc_add(bc_from_q(1, 0, prec),
                                        tau_sqrt(5, prec)),
                                 prec);
    CHECK(bc_close_2exp(bc_add(j1, j2), bc_from_q(1264000, 0, prec),
                        -prec + 72));
    CHECK(bc_close_2exp(bc_mul(j1, j2), bc_from_q(-681472000, 0, prec),
                        -prec + 104));
}

TEST_CASE("poles, floor, and precision doubling") {
    long prec = 96;
    bigcomplex i1 = tau_d(0, 1, prec);
    CHECK_THROWS_AS(wp_value(bigcomplex(prec), i1, prec), pole_error);
    CHECK_THROWS_AS(wp_value(bc_from_q(3, 0, prec), i1, prec), pole_error);
    CHECK_THROWS_AS(wp_prime_value(bc_add(i1, i1), i1, prec), pole_error);
    CHECK_THROWS_AS(lattice_values_at(tau_d(0, 0.05, prec), prec),
                    std::invalid_argument);

    bigcomplex tau = tau_d(0.23, 1.07, prec);
    bigcomplex lo = j_invariant(tau, prec);
    bigcomplex hi = j_invariant(tau_d(0.23, 1.07, prec + 64), prec + 64);
    CHECK(mid_dist(lo, hi) < std::ldexp(1.0, (int)bc_err2exp(lo) + 1));
}
