#include "drwitt/theta.hpp"

#include <cmath>

namespace drwitt {

namespace {

// nearest-integer reduction of a rational to [-1/2, 1/2)
mpq_class round_frac(const mpq_class& x) {
    mpz_class num = x.get_num(), den = x.get_den(), q, r;
    // floor(x + 1/2) = floor((2 num + den) / (2 den))
    mpz_class n2 = 2 * num + den, d2 = 2 * den;
    mpz_fdiv_q(q.get_mpz_t(), n2.get_mpz_t(), d2.get_mpz_t());
    return x - mpq_class(q);
}

// upper bound on the euclidean norm of Im u over the balls, 64-bit directed
bigfloat im_norm_ub(const std::vector<bigcomplex>& u) {
    bigfloat s(64), t(64);
    mpfr_set_zero(s, 1);
    for (const auto& z : u) {
        mpfr_abs(t, z.im, MPFR_RNDU);
        mpfr_add(t, t, z.err, MPFR_RNDU);
        mpfr_sqr(t, t, MPFR_RNDU);
        mpfr_add(s, s, t, MPFR_RNDU);
    }
    mpfr_sqrt(s, s, MPFR_RNDU);
    return s;
}

// smallest R with a certified tail bound below 2^{-prec-8}: the terms beyond
// the box |n|_inf <= R are dominated by
//   f(m) = 2g 3^{g-1} m^{g-1} exp(-pi lam (m - 1/2)^2 + 2 pi M sqrt(g) (m + 1/2))
// summed as a geometric series once consecutive ratios drop under 1/2
long tail_radius(long g, const mpq_class& lam, const bigfloat& M, long prec,
                 bigfloat& tail_out) {
    bigfloat lam_lb(64);
    {
        bigfloat n(64), d(64);
        mpfr_set_z(n, lam.get_num().get_mpz_t(), MPFR_RNDD);
        mpfr_set_z(d, lam.get_den().get_mpz_t(), MPFR_RNDU);
        mpfr_div(lam_lb, n, d, MPFR_RNDD);
    }
    bigfloat pi(64), sg(64), t(64), e(64), f(64);
    mpfr_const_pi(pi, MPFR_RNDD);
    mpfr_set_si(sg, g, MPFR_RNDU);
    mpfr_sqrt(sg, sg, MPFR_RNDU);
    auto log2f = [&](long m) {
        // (g-1) log2 m + log2(2g 3^{g-1}) + (2 pi M sqrt(g)(m+1/2) - pi lam (m-1/2)^2)/ln 2
        bigfloat acc(64), u(64);
        mpfr_set_si(acc, 2 * g, MPFR_RNDU);
        for (long i = 1; i < g; ++i) mpfr_mul_si(acc, acc, 3, MPFR_RNDU);
        mpfr_log2(acc, acc, MPFR_RNDU);
        if (g > 1) {
            mpfr_set_si(u, m, MPFR_RNDU);
            mpfr_log2(u, u, MPFR_RNDU);
            mpfr_mul_si(u, u, g - 1, MPFR_RNDU);
            mpfr_add(acc, acc, u, MPFR_RNDU);
        }
        bigfloat expo(64), lin(64);
        mpfr_set_si(lin, 2 * m + 1, MPFR_RNDU);
        mpfr_div_2si(lin, lin, 1, MPFR_RNDU);
        mpfr_mul(lin, lin, M, MPFR_RNDU);
        mpfr_mul(lin, lin, sg, MPFR_RNDU);
        mpfr_mul_2si(lin, lin, 1, MPFR_RNDU);
        bigfloat pi_u(64);
        mpfr_const_pi(pi_u, MPFR_RNDU);
        mpfr_mul(lin, lin, pi_u, MPFR_RNDU);
        mpfr_set_si(expo, 2 * m - 1, MPFR_RNDD);
        mpfr_div_2si(expo, expo, 1, MPFR_RNDD);
        mpfr_sqr(expo, expo, MPFR_RNDD);
        mpfr_mul(expo, expo, lam_lb, MPFR_RNDD);
        mpfr_mul(expo, expo, pi, MPFR_RNDD);
        mpfr_sub(expo, lin, expo, MPFR_RNDU);  // upper bound on the exponent
        bigfloat ln2(64);
        mpfr_const_log2(ln2, MPFR_RNDD);
        mpfr_div(expo, expo, ln2, MPFR_RNDU);
        mpfr_add(acc, acc, expo, MPFR_RNDU);
        return acc;
    };
    for (long R = 1; R <= 100000; ++R) {
        bigfloat l1 = log2f(R + 1), l2 = log2f(R + 2);
        mpfr_sub(t, l2, l1, MPFR_RNDU);
        if (mpfr_cmp_si(t, -1) > 0) continue;  // ratio not yet <= 1/2
        if (mpfr_cmp_si(l1, -(prec + 9)) < 0) {
            mpfr_set_si(e, 1, MPFR_RNDU);
            mpfr_add(f, l1, e, MPFR_RNDU);  // tail <= 2 f(R+1)
            bigfloat tail(64);
            mpfr_exp2(tail, f, MPFR_RNDU);
            tail_out = std::move(tail);
            return R;
        }
    }
    throw std::invalid_argument("theta: tail bound unreachable; reduce tau first");
}

}  // namespace

torsion_index make_torsion(std::vector<mpq_class> a, long N) {
    arg_check(N >= 1, "make_torsion: N >= 1");
    arg_check(a.size() % 2 == 0 && !a.empty(), "make_torsion: even length");
    for (auto& x : a) {
        mpq_class scaled = x * N;
        arg_check(scaled.get_den() == 1, "make_torsion: N a not integral");
        // reduce mod Z to [0, 1)
        mpz_class fl;
        mpz_fdiv_q(fl.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
        x -= mpq_class(fl);
    }
    return {std::move(a), N};
}

bigcomplex theta(const theta_char& k, const std::vector<bigcomplex>& u,
                 const siegel_point& tau, long prec) {
    long g = tau.g;
    arg_check(prec >= 32, "theta: prec >= 32");
    arg_check(k.g() == g, "theta: characteristic size");
    arg_check((long)u.size() == g, "theta: argument size");
    mpq_class lam = siegel_lambda_lb(tau);
    arg_check(lam > mpq_class(1, 1024),
              "theta: smallest eigenvalue of Im tau below floor; reduce tau first");

    long wp = prec + 64;
    // shifting k by integers reindexes the same series
    std::vector<mpq_class> kr(g);
    for (long i = 0; i < g; ++i) kr[i] = round_frac(k.k[i]);

    bigfloat M = im_norm_ub(u);
    bigfloat tail(64);
    long R = tail_radius(g, lam, M, prec, tail);

    bigcomplex acc(wp);
    std::vector<long> n(g, -R);
    std::vector<bigcomplex> w(g);
    // term arithmetic must run at wp regardless of the input midpoint precision
    std::vector<bigcomplex> uw(g);
    for (long i = 0; i < g; ++i) uw[i] = bc_at_prec(u[i], wp);
    std::vector<bigcomplex> tau_half(g * g);
    for (long i = 0; i < g; ++i)
        for (long j = 0; j < g; ++j)
            tau_half[i * g + j] =
                bc_scale_q(mpq_class(1, 2), bc_at_prec(tau.at(i, j), wp));
    while (true) {
        for (long i = 0; i < g; ++i) w[i] = bc_from_q(kr[i] + n[i], 0, wp);
        // t = sum_ij (tau_ij / 2) w_i w_j + sum_i u_i w_i
        bigcomplex t(wp);
        for (long i = 0; i < g; ++i) {
            bigcomplex row(wp);
            for (long j = 0; j < g; ++j)
                row = bc_add(row, bc_mul(tau_half[i * g + j], w[j]));
            t = bc_add(t, bc_mul(w[i], row));
        }
        for (long i = 0; i < g; ++i) t = bc_add(t, bc_mul(uw[i], w[i]));
        acc = bc_add(acc, bc_exp2pii(t));

        long axis = g - 1;
        while (axis >= 0 && n[axis] == R) {
            n[axis] = -R;
            --axis;
        }
        if (axis < 0) break;
        ++n[axis];
    }
    mpfr_add(acc.err.v, acc.err.v, tail, MPFR_RNDU);
    return acc;
}

std::vector<bigcomplex> torsion_point(const torsion_index& a,
                                      const siegel_point& tau,
                                      const type_delta& delta, long prec) {
    long g = tau.g;
    arg_check((long)a.a.size() == 2 * g, "torsion_point: index size 2g");
    arg_check(delta.g() == g, "torsion_point: type size");
    long wp = prec + 64;
    std::vector<bigcomplex> u(g, bigcomplex(wp));
    for (long j = 0; j < g; ++j) {
        bigcomplex s(wp);
        for (long i = 0; i < g; ++i)
            if (a.a[i] != 0)
                s = bc_add(s, bc_scale_q(a.a[i], bc_at_prec(tau.at(i, j), wp)));
        s = bc_add(s, bc_from_q(a.a[g + j] * mpq_class(delta.d[j]), 0, wp));
        u[j] = s;
    }
    return u;
}

bigcomplex theta_ratio(const theta_char& k, const theta_char& l,
                       const torsion_index& a, const siegel_point& tau,
                       const type_delta& delta, long prec) {
    long g = tau.g;
    arg_check(k.g() == g && l.g() == g, "theta_ratio: characteristic size");
    for (long i = 0; i < g; ++i) {
        arg_check(mpq_class(k.k[i] * delta.d[i]).get_den() == 1,
                  "theta_ratio: delta k not integral");
        arg_check(mpq_class(l.k[i] * delta.d[i]).get_den() == 1,
                  "theta_ratio: delta l not integral");
    }
    bool same = true;
    for (long i = 0; i < g; ++i)
        if (round_frac(k.k[i] - l.k[i]) != 0) same = false;
    if (same) return bc_from_q(1, 0, prec);

    std::vector<bigcomplex> u = torsion_point(a, tau, delta, prec);
    bigcomplex num = theta(k, u, tau, prec);
    bigcomplex den = theta(l, u, tau, prec);
    // demand |den| > 2 err(den) so the quotient ball is meaningful
    bigfloat m(64);
    mpfr_hypot(m, den.re, den.im, MPFR_RNDD);
    bigfloat e2(64);
    mpfr_mul_2si(e2, den.err, 1, MPFR_RNDU);
    if (mpfr_cmp(m, e2) <= 0)
        throw pole_error("theta_ratio: pole or undefined at this torsion index");
    return bc_div(num, den);
}

std::vector<theta_char> theta_chars(const type_delta& delta) {
    long g = delta.g();
    std::vector<theta_char> out;
    std::vector<long> m(g, 0);
    while (true) {
        theta_char k;
        k.k.resize(g);
        for (long i = 0; i < g; ++i) {
            k.k[i] = mpq_class(mpz_class(m[i]), delta.d[i]);
            k.k[i].canonicalize();
        }
        out.push_back(std::move(k));
        long axis = g - 1;
        while (axis >= 0 && mpz_class(m[axis] + 1) == delta.d[axis]) {
            m[axis] = 0;
            --axis;
        }
        if (axis < 0) break;
        ++m[axis];
    }
    return out;
}

std::vector<bigcomplex> theta_null_vector(const siegel_point& tau,
                                          const type_delta& delta, long prec) {
    long g = tau.g;
    arg_check(delta.g() == g, "theta_null_vector: type size");
    arg_check(delta.embed_ok(), "theta_null_vector: need d_1 >= 3");
    std::vector<bigcomplex> zero(g, bigcomplex(prec + 64));
    std::vector<bigcomplex> out;
    for (const auto& k : theta_chars(delta)) out.push_back(theta(k, zero, tau, prec));
    bool nonzero = false;
    for (const auto& v : out) {
        bigfloat m(64);
        mpfr_hypot(m, v.re, v.im, MPFR_RNDD);
        if (mpfr_cmp(m, v.err) > 0) nonzero = true;
    }
    logic_check(nonzero, "theta_null_vector: vanishing null vector");
    return out;
}

}  // namespace drwitt
