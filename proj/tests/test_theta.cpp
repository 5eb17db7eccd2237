#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "drwitt/theta.hpp"

using namespace drwitt;

namespace {

// independent direct summation over the full box |n|_inf <= R, no
// characteristic reduction, row-times-vector quadratic form
bigcomplex oracle_theta(const std::vector<mpq_class>& k,
                        const std::vector<bigcomplex>& u, const siegel_point& tau,
                        long wp, long R) {
    long g = tau.g;
    bigcomplex acc(wp);
    std::vector<long> n(g, -R);
    while (true) {
        std::vector<bigcomplex> w(g);
        for (long i = 0; i < g; ++i) w[i] = bc_from_q(k[i] + n[i], 0, wp);
        std::vector<bigcomplex> tw(g, bigcomplex(wp));
        for (long i = 0; i < g; ++i)
            for (long j = 0; j < g; ++j)
                tw[i] = bc_add(tw[i], bc_mul(tau.at(i, j), w[j]));
        bigcomplex t(wp);
        for (long i = 0; i < g; ++i) t = bc_add(t, bc_mul(w[i], tw[i]));
        t = bc_scale_q(mpq_class(1, 2), t);
        for (long i = 0; i < g; ++i) t = bc_add(t, bc_mul(u[i], w[i]));
        acc = bc_add(acc, bc_exp2pii(t));
        long ax = g - 1;
        while (ax >= 0 && n[ax] == R) {
            n[ax] = -R;
            --ax;
        }
        if (ax < 0) break;
        ++n[ax];
    }
    return acc;
}

siegel_point tau_g1(double x, double y, long prec) {
    siegel_point t;
    t.g = 1;
    t.tau = {bc_from_d(x, y, prec)};
    return t;
}

siegel_point tau_g2(double x1, double y1, double x2, double y2,
                    std::complex<double> z, long prec) {
    siegel_point t;
    t.g = 2;
    bigcomplex off = bc_from_d(z.real(), z.imag(), prec);
    t.tau = {bc_from_d(x1, y1, prec), off, off, bc_from_d(x2, y2, prec)};
    return t;
}

std::vector<bigcomplex> zero_u(long g, long prec) {
    return std::vector<bigcomplex>(g, bigcomplex(prec));
}

double mid_dist(const bigcomplex& a, const bigcomplex& b) {
    return std::abs(a.to_complex_d() - b.to_complex_d());
}

}  // namespace

TEST_CASE("theta at tau = i equals pi^{1/4} / Gamma(3/4)") {
    long prec = 128;
    theta_char k{{mpq_class(0)}};
    bigcomplex v = theta(k, zero_u(1, prec), tau_g1(0, 1, prec), prec);
    CHECK(std::abs(v.to_complex_d().real() - 1.0864348112) < 1e-9);
    CHECK(std::abs(v.to_complex_d().imag()) < 1e-30);
    CHECK(bc_err2exp(v) < -prec);

    // closed form at high precision
    bigfloat want(256), g34(256);
    mpfr_const_pi(want, MPFR_RNDN);
    mpfr_rootn_ui(want, want, 4, MPFR_RNDN);
    mpfr_set_ui(g34, 3, MPFR_RNDN);
    mpfr_div_ui(g34, g34, 4, MPFR_RNDN);
    mpfr_gamma(g34, g34, MPFR_RNDN);
    mpfr_div(want, want, g34, MPFR_RNDN);
    bigfloat diff(256);
    mpfr_sub(diff, v.re, want, MPFR_RNDN);
    mpfr_abs(diff, diff, MPFR_RNDU);
    bigfloat tol(64);
    mpfr_set_ui_2exp(tol, 1, -prec - 4, MPFR_RNDN);
    mpfr_add(tol, tol, v.err, MPFR_RNDU);
    CHECK(mpfr_cmp(diff, tol) < 0);
}

TEST_CASE("theta matches the doubled-radius oracle, genus one and two") {
    long prec = 128;
    std::mt19937 rng(31415);
    std::uniform_real_distribution<double> xr(-0.5, 0.5), yr(0.7, 1.8),
        ur(-0.4, 0.4);
    std::uniform_int_distribution<int> mr(0, 11), dr2(1, 4);

    for (int trial = 0; trial < 10; ++trial) {
        siegel_point tau = tau_g1(xr(rng), yr(rng), prec + 64);
        theta_char k{{mpq_class(mr(rng), 12)}};
        k.k[0].canonicalize();
        std::vector<bigcomplex> u = {bc_from_d(ur(rng), ur(rng), prec + 64)};
        bigcomplex got = theta(k, u, tau, prec);
        bigcomplex want = oracle_theta(k.k, u, tau, prec + 64, 26);
        CHECK(bc_close_2exp(got, want, -120));
    }
    for (int trial = 0; trial < 10; ++trial) {
        siegel_point tau = tau_g2(xr(rng), yr(rng) + 0.4, xr(rng), yr(rng) + 0.4,
                                  {xr(rng) * 0.4, xr(rng) * 0.4}, prec + 64);
        theta_char k{{mpq_class(mr(rng) % 4, dr2(rng)), mpq_class(mr(rng) % 4, dr2(rng))}};
        for (auto& q : k.k) q.canonicalize();
        std::vector<bigcomplex> u = {bc_from_d(ur(rng), ur(rng), prec + 64),
                                     bc_from_d(ur(rng), ur(rng), prec + 64)};
        bigcomplex got = theta(k, u, tau, prec);
        bigcomplex want = oracle_theta(k.k, u, tau, prec + 64, 22);
        CHECK(bc_close_2exp(got, want, -120));
    }
}

TEST_CASE("truncation soundness: oracle stable under radius escalation") {
    long wp = 192;
    siegel_point tau = tau_g1(0.3, 0.9, wp);
    std::vector<mpq_class> k = {mpq_class(1, 3)};
    std::vector<bigcomplex> u = {bc_from_d(0.2, -0.3, wp)};
    bigcomplex a = oracle_theta(k, u, tau, wp, 18);
    bigcomplex b = oracle_theta(k, u, tau, wp, 27);
    CHECK(bc_close_2exp(a, b, -135));
}

TEST_CASE("reindexing and quasi-periodicity identities") {
    long prec = 128;
    std::mt19937 rng(2718);
    std::uniform_real_distribution<double> xr(-0.5, 0.5), yr(0.8, 1.6),
        ur(-0.5, 0.5);
    std::uniform_int_distribution<int> num(-5, 5);
    for (int trial = 0; trial < 6; ++trial) {
        long g = 1 + trial % 2;
        siegel_point tau =
            g == 1 ? tau_g1(xr(rng), yr(rng), prec)
                   : tau_g2(xr(rng), yr(rng), xr(rng), yr(rng), {0.1, 0.05}, prec);
        theta_char k;
        std::vector<bigcomplex> u;
        std::vector<mpq_class> kneg;
        std::vector<bigcomplex> uneg;
        for (long i = 0; i < g; ++i) {
            mpq_class ki(num(rng), 4);
            ki.canonicalize();
            k.k.push_back(ki);
            kneg.push_back(-ki);
            bigcomplex ui = bc_from_d(ur(rng), ur(rng), prec);
            u.push_back(ui);
            uneg.push_back(bc_neg(ui));
        }
        bigcomplex base = theta(k, u, tau, prec);

        // theta^k(u) = theta^{-k}(-u)
        bigcomplex neg = theta(theta_char{kneg}, uneg, tau, prec);
        CHECK(bc_close_2exp(base, neg, -120));

        // theta^k(u + m) = exp(m k) theta^k(u)
        std::vector<bigcomplex> shifted = u;
        mpq_class mk = 0;
        for (long i = 0; i < g; ++i) {
            long mi = num(rng);
            shifted[i] = bc_add(shifted[i], bc_from_q(mi, 0, prec));
            mk += mi * k.k[i];
        }
        bigcomplex lhs = theta(k, shifted, tau, prec);
        mpz_class flr;  // drop the integer part of m k: exp of it is exactly 1
        mpz_fdiv_q(flr.get_mpz_t(), mk.get_num_mpz_t(), mk.get_den_mpz_t());
        mk -= flr;
        bigcomplex rhs = bc_mul(bc_exp2pii(bc_from_q(mk, 0, prec + 32)), base);
        CHECK(bc_close_2exp(lhs, rhs, -120));

        // integer shifts of the characteristic reindex the same series
        theta_char kshift = k;
        kshift.k[0] += 3;
        CHECK(bc_close_2exp(theta(kshift, u, tau, prec), base, -120));
    }
}

TEST_CASE("precision doubling stays within the reported radius") {
    long prec = 96;
    siegel_point lo = tau_g1(0.21, 1.17, prec);
    siegel_point hi = tau_g1(0.21, 1.17, prec + 64);
    theta_char k{{mpq_class(1, 4)}};
    std::vector<bigcomplex> ulo = {bc_from_d(0.3, 0.1, prec)};
    std::vector<bigcomplex> uhi = {bc_from_d(0.3, 0.1, prec + 64)};
    bigcomplex a = theta(k, ulo, lo, prec);
    bigcomplex b = theta(k, uhi, hi, prec + 64);
    bigfloat d(256), dr(256), di(256);
    mpfr_sub(dr, a.re, b.re, MPFR_RNDN);
    mpfr_sub(di, a.im, b.im, MPFR_RNDN);
    mpfr_hypot(d, dr, di, MPFR_RNDU);
    CHECK(mpfr_cmp(d, a.err) < 0);
}

TEST_CASE("theta rejects unreduced tau and tiny precision") {
    theta_char k{{mpq_class(0)}};
    CHECK_THROWS_AS(theta(k, zero_u(1, 64), tau_g1(0, 0.0005, 64), 64),
                    std::invalid_argument);
    CHECK_THROWS_AS(theta(k, zero_u(1, 64), tau_g1(0, 1, 64), 16),
                    std::invalid_argument);
}

TEST_CASE("torsion index construction and the torsion point map") {
    torsion_index a = make_torsion({mpq_class(7, 4), mpq_class(-1, 4)}, 4);
    CHECK(a.a[0] == mpq_class(3, 4));  // reduced mod Z
    CHECK(a.a[1] == mpq_class(3, 4));
    CHECK_THROWS_AS(make_torsion({mpq_class(1, 3), mpq_class(0)}, 4),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_torsion({mpq_class(1, 2)}, 2), std::invalid_argument);

    // u = a1 tau + a2 delta at g = 1
    long prec = 96;
    siegel_point tau = tau_g1(0.25, 1.5, prec);
    torsion_index b = make_torsion({mpq_class(1, 2), mpq_class(1, 4)}, 4);
    type_delta d4{{4}};
    auto u = torsion_point(b, tau, d4, prec);
    REQUIRE(u.size() == 1);
    // (1/2)(0.25 + 1.5 i) + (1/4)(4) = 1.125 + 0.75 i
    CHECK(mid_dist(u[0], bc_from_d(1.125, 0.75, prec)) < 1e-25);
}

TEST_CASE("theta ratio: shortcut, oracle value, pole detection, parity") {
    long prec = 128;
    type_delta d2{{2}};
    siegel_point tau = tau_g1(0, 2, prec);

    theta_char k0{{mpq_class(0)}}, kh{{mpq_class(1, 2)}};
    torsion_index a = make_torsion({mpq_class(0), mpq_class(1, 2)}, 2);

    // equal characteristics give exactly one
    bigcomplex one = theta_ratio(kh, kh, a, tau, d2, prec);
    CHECK(one.to_complex_d() == std::complex<double>(1, 0));
    CHECK(bc_err2exp(one) == bc_exact_exp);

    // against the direct oracle: u = (1/2) * 2 = 1
    std::vector<bigcomplex> u = {bc_from_q(1, 0, prec + 64)};
    bigcomplex num = oracle_theta(k0.k, u, tau, prec + 64, 24);
    bigcomplex den = oracle_theta(kh.k, u, tau, prec + 64, 24);
    bigcomplex want = bc_div(num, den);
    bigcomplex got = theta_ratio(k0, kh, a, tau, d2, prec);
    CHECK(bc_close_2exp(got, want, -prec + 8));

    // u = (1/4) * 2 = 1/2 is a zero of theta^{1/2} at every tau (the series
    // cancels in pairs w <-> -w), so the ratio against it has a pole
    torsion_index half = make_torsion({mpq_class(0), mpq_class(1, 4)}, 4);
    CHECK_THROWS_AS(theta_ratio(k0, kh, half, tau, d2, prec), pole_error);

    // and k = 0 vanishes at u = tau/2 + 1/2
    torsion_index odd = make_torsion({mpq_class(1, 2), mpq_class(1, 4)}, 4);
    CHECK_THROWS_AS(theta_ratio(kh, k0, odd, tau_g1(0, 1, prec), d2, prec),
                    pole_error);

    // delta-incompatible characteristics are rejected
    theta_char bad{{mpq_class(1, 3)}};
    CHECK_THROWS_AS(theta_ratio(bad, kh, a, tau, d2, prec), std::invalid_argument);

    // pure-imaginary tau: the ratio at (0, -x) conjugates the one at (0, x)
    bigcomplex at_pos = theta_ratio(
        k0, kh, make_torsion({mpq_class(0), mpq_class(3, 8)}, 8), tau, d2, prec);
    bigcomplex at_neg = theta_ratio(
        k0, kh, make_torsion({mpq_class(0), mpq_class(-3, 8)}, 8), tau, d2, prec);
    CHECK(bc_close_2exp(at_neg, bc_conj(at_pos), -120));
}

TEST_CASE("theta null vector: order, values, invariance") {
    long prec = 128;
    type_delta d4{{4}};
    siegel_point ti = tau_g1(0, 1, prec);

    auto chars = theta_chars(d4);
    REQUIRE(chars.size() == 4);
    CHECK(chars[0].k[0] == 0);
    CHECK(chars[1].k[0] == mpq_class(1, 4));
    CHECK(chars[3].k[0] == mpq_class(3, 4));

    auto nv = theta_null_vector(ti, d4, prec);
    REQUIRE(nv.size() == 4);
    for (size_t i = 0; i < 4; ++i) {
        bigcomplex direct = theta(chars[i], zero_u(1, prec), ti, prec);
        CHECK(bc_close_2exp(nv[i], direct, -120));
        bigcomplex orc = oracle_theta(chars[i].k, zero_u(1, prec + 64), ti, prec + 64, 24);
        CHECK(bc_close_2exp(nv[i], orc, -120));
    }
    // negation symmetry at u = 0: components 1/4 and 3/4 agree
    CHECK(bc_close_2exp(nv[1], nv[3], -120));

    // exact invariance under tau -> tau + 32 (phase trivial for all k = m/4)
    auto nv2 = theta_null_vector(tau_g1(32, 1, prec), d4, prec);
    for (size_t i = 0; i < 4; ++i) CHECK(bc_close_2exp(nv[i], nv2[i], -120));

    // genus two: d1 d2 entries, all finite, vector nonzero
    type_delta d33{{3, 3}};
    siegel_point t2 = tau_g2(0.1, 1.2, -0.2, 1.4, {0.15, 0.1}, prec);
    auto nv33 = theta_null_vector(t2, d33, prec);
    CHECK(nv33.size() == 9);
    auto chars33 = theta_chars(d33);
    CHECK(chars33[1].k[0] == 0);
    CHECK(chars33[1].k[1] == mpq_class(1, 3));
    CHECK(chars33[3].k[0] == mpq_class(1, 3));
    CHECK(chars33[3].k[1] == 0);
    bool some = false;
    for (const auto& v : nv33)
        if (std::abs(v.to_complex_d()) > 1e-3) some = true;
    CHECK(some);

    // embedding condition enforced
    CHECK_THROWS_AS(theta_null_vector(ti, type_delta{{2}}, prec),
                    std::invalid_argument);
}
