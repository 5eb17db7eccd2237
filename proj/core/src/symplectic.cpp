#include "drwitt/symplectic.hpp"

#include <algorithm>
#include <cmath>

namespace drwitt {

namespace {

// ---- congruence transforms for the alternating reduction ------------------

struct cong_work {
    zmat A, U;  // invariant: A = U * E0 * U^t

    void rswap(long i, long j) {
        if (i == j) return;
        for (long t = 0; t < A.c; ++t) std::swap(A.at(i, t), A.at(j, t));
        for (long t = 0; t < A.r; ++t) std::swap(A.at(t, i), A.at(t, j));
        for (long t = 0; t < U.c; ++t) std::swap(U.at(i, t), U.at(j, t));
    }
    // v_i += q v_j
    void radd(long i, long j, const mpz_class& q) {
        if (q == 0) return;
        for (long t = 0; t < A.c; ++t) A.at(i, t) += q * A.at(j, t);
        for (long t = 0; t < A.r; ++t) A.at(t, i) += q * A.at(t, j);
        for (long t = 0; t < U.c; ++t) U.at(i, t) += q * U.at(j, t);
    }
    void rneg(long i) {
        for (long t = 0; t < A.c; ++t) A.at(i, t) = -A.at(i, t);
        for (long t = 0; t < A.r; ++t) A.at(t, i) = -A.at(t, i);
        for (long t = 0; t < U.c; ++t) U.at(i, t) = -U.at(i, t);
    }
};

// ---- rational polynomial helpers (coefficients low degree first) ----------

using qpoly = std::vector<mpq_class>;

long pdeg(const qpoly& p) {
    long d = (long)p.size() - 1;
    while (d >= 0 && p[d] == 0) --d;
    return d;
}

qpoly ptrim(qpoly p) {
    p.resize(pdeg(p) + 1 > 0 ? pdeg(p) + 1 : 0);
    return p;
}

qpoly pmod(qpoly a, const qpoly& m) {
    long dm = pdeg(m);
    arg_check(dm >= 1 && m[dm] == 1, "pmod: monic modulus");
    long da = pdeg(a);
    while (da >= dm) {
        mpq_class lead = a[da];
        for (long i = 0; i <= dm; ++i) a[da - dm + i] -= lead * m[i];
        da = pdeg(a);
    }
    a.resize(dm);
    return a;
}

qpoly pmulmod(const qpoly& a, const qpoly& b, const qpoly& m) {
    if (a.empty() || b.empty()) return qpoly(pdeg(m), 0);
    qpoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return pmod(std::move(c), m);
}

qpoly pcompose_mod(const qpoly& p, const qpoly& q, const qpoly& m) {
    qpoly r(pdeg(m), 0);
    for (long k = pdeg(p); k >= 0; --k) {
        r = pmulmod(r, q, m);
        r[0] += p[k];
    }
    return r;
}

// power sums of the roots from the coefficients (Newton)
std::vector<mpq_class> power_sums(const qpoly& m, long upto) {
    long d = pdeg(m);
    std::vector<mpq_class> p(upto + 1, 0);
    p[0] = d;
    for (long k = 1; k <= upto; ++k) {
        mpq_class s = 0;
        if (k <= d) s = -k * m[d - k];
        for (long i = 1; i < k && i <= d; ++i) s -= m[d - i] * p[k - i];
        p[k] = s;
    }
    return p;
}

// ---- complex matrices on balls --------------------------------------------

struct cmat {
    long r = 0, c = 0;
    std::vector<bigcomplex> e;
    cmat() = default;
    cmat(long rows, long cols, long prec)
        : r(rows), c(cols), e(rows * cols, bigcomplex(prec)) {}
    bigcomplex& at(long i, long j) { return e[i * c + j]; }
    const bigcomplex& at(long i, long j) const { return e[i * c + j]; }
};

cmat cm_mul(const cmat& A, const cmat& B) {
    arg_check(A.c == B.r, "cm_mul: shape");
    long p = A.e.empty() ? 64 : A.e.front().prec();
    cmat C(A.r, B.c, p);
    for (long i = 0; i < A.r; ++i)
        for (long j = 0; j < B.c; ++j) {
            bigcomplex s(p);
            for (long k = 0; k < A.c; ++k) s = bc_add(s, bc_mul(A.at(i, k), B.at(k, j)));
            C.at(i, j) = s;
        }
    return C;
}

cmat cm_inv(const cmat& A) {
    arg_check(A.r == A.c, "cm_inv: square");
    long n = A.r, p = A.e.front().prec();
    cmat W = A, I(n, n, p);
    for (long i = 0; i < n; ++i) I.at(i, i) = bc_from_q(1, 0, p);
    for (long k = 0; k < n; ++k) {
        long piv = -1;
        double best = -1;
        for (long i = k; i < n; ++i) {
            double m = std::abs(W.at(i, k).to_complex_d());
            if (m > best) {
                best = m;
                piv = i;
            }
        }
        if (piv != k)
            for (long j = 0; j < n; ++j) {
                std::swap(W.at(k, j), W.at(piv, j));
                std::swap(I.at(k, j), I.at(piv, j));
            }
        if (mpfr_sgn(bc_abs_lb(W.at(k, k)).v) <= 0)
            throw precision_error("cm_inv: pivot not separated from zero");
        bigcomplex d = W.at(k, k);
        for (long j = 0; j < n; ++j) {
            W.at(k, j) = bc_div(W.at(k, j), d);
            I.at(k, j) = bc_div(I.at(k, j), d);
        }
        for (long i = 0; i < n; ++i) {
            if (i == k) continue;
            bigcomplex f = W.at(i, k);
            for (long j = 0; j < n; ++j) {
                W.at(i, j) = bc_sub(W.at(i, j), bc_mul(f, W.at(k, j)));
                I.at(i, j) = bc_sub(I.at(i, j), bc_mul(f, I.at(k, j)));
            }
        }
    }
    return I;
}

bigcomplex bc_mid(const bigcomplex& z) {
    bigcomplex w = z;
    mpfr_set_zero(w.err.v, 1);
    return w;
}

// rational reconstruction by continued fractions: nearest p/q with q bounded
mpq_class q_reconstruct(const mpq_class& x, const mpz_class& max_den) {
    mpz_class p0 = 1, q0 = 0, p1, q1;
    mpq_class rem = x;
    mpz_class a = mpz_class(rem.get_num() / rem.get_den());
    if (rem < 0 && mpq_class(a) != rem) a -= 1;  // floor
    p1 = a;
    q1 = 1;
    rem -= a;
    while (rem != 0) {
        rem = 1 / rem;
        a = rem.get_num() / rem.get_den();
        if (rem < 0 && mpq_class(a) != rem) a -= 1;
        mpz_class p2 = a * p1 + p0, q2 = a * q1 + q0;
        if (q2 > max_den) break;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        rem -= a;
    }
    mpq_class out(p1, q1);
    out.canonicalize();
    return out;
}

mpq_class qabs(const mpq_class& x) { return x < 0 ? mpq_class(-x) : x; }

// exact Sylvester test: is S - t I positive definite?
bool shifted_pd(const qmat& S, const mpq_class& t) {
    long n = S.r;
    for (long k = 1; k <= n; ++k) {
        qmat M(k, k);
        for (long i = 0; i < k; ++i)
            for (long j = 0; j < k; ++j) {
                M.at(i, j) = S.at(i, j);
                if (i == j) M.at(i, j) -= t;
            }
        if (qm_det(M) <= 0) return false;
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------

zmat j_delta(const type_delta& delta) {
    long g = delta.g();
    arg_check(g >= 1, "j_delta: empty type");
    zmat J(2 * g, 2 * g);
    for (long i = 0; i < g; ++i) {
        J.at(i, g + i) = delta.d[i];
        J.at(g + i, i) = -delta.d[i];
    }
    return J;
}

frobenius_result frobenius_reduce(const zmat& E) {
    arg_check(E.r == E.c && E.r >= 2 && E.r % 2 == 0, "frobenius_reduce: even square");
    arg_check(zm_transpose(E) == zm_neg(E), "frobenius_reduce: alternating");
    arg_check(zm_det(E) != 0, "frobenius_reduce: nondegenerate");
    long m = E.r, g = m / 2;
    cong_work w{E, zm_identity(m)};

    for (long k = 0; k + 1 < m; k += 2) {
        long guard = 0;
        while (true) {
            logic_check(++guard < 100000, "frobenius_reduce: no convergence");
            // minimal nonzero entry in the trailing block, above the diagonal
            long bi = -1, bj = -1;
            mpz_class best = 0;
            for (long i = k; i < m; ++i)
                for (long j = i + 1; j < m; ++j) {
                    mpz_class v = abs(w.A.at(i, j));
                    if (v != 0 && (bi < 0 || v < best)) {
                        best = v;
                        bi = i;
                        bj = j;
                    }
                }
            logic_check(bi >= 0, "frobenius_reduce: degenerate block");
            w.rswap(bi, k);
            if (bj == k) bj = bi;  // moved by the swap
            w.rswap(bj, k + 1);
            if (w.A.at(k, k + 1) < 0) w.rneg(k + 1);
            mpz_class d = w.A.at(k, k + 1);

            // euclidean clearing of the two pivot rows
            bool restart = false;
            for (long j = k + 2; j < m && !restart; ++j) {
                mpz_class q, r;
                mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w.A.at(k, j).get_mpz_t(),
                            d.get_mpz_t());
                w.radd(j, k + 1, -q);
                if (r != 0) restart = true;
            }
            for (long j = k + 2; j < m && !restart; ++j) {
                mpz_class q, r;
                mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), w.A.at(k + 1, j).get_mpz_t(),
                            d.get_mpz_t());
                w.radd(j, k, q);
                if (r != 0) restart = true;
            }
            if (restart) continue;

            // pivot must divide the trailing block for the divisor chain
            bool bad = false;
            for (long i = k + 2; i < m && !bad; ++i)
                for (long j = i + 1; j < m && !bad; ++j)
                    if (w.A.at(i, j) % d != 0) {
                        w.radd(k, i, 1);
                        bad = true;
                    }
            if (!bad) break;
        }
    }

    // interleaved blocks -> [[0, D], [-D, 0]] layout
    zmat P(m, m);
    for (long i = 0; i < g; ++i) {
        P.at(i, 2 * i) = 1;
        P.at(g + i, 2 * i + 1) = 1;
    }
    zmat U = zm_mul(P, w.U);
    type_delta delta;
    zmat A = zm_mul(zm_mul(P, w.A), zm_transpose(P));
    for (long i = 0; i < g; ++i) delta.d.push_back(A.at(i, g + i));
    for (long i = 0; i + 1 < g; ++i)
        logic_check(delta.d[i] > 0 && delta.d[i + 1] % delta.d[i] == 0,
                    "frobenius_reduce: divisor chain broken");
    logic_check(delta.d.back() > 0, "frobenius_reduce: nonpositive divisor");
    logic_check(zm_mul(zm_mul(U, E), zm_transpose(U)) == j_delta(delta),
                "frobenius_reduce: transform identity failed");
    mpz_class du = zm_det(U);
    logic_check(du == 1 || du == -1, "frobenius_reduce: U not unimodular");
    return {U, delta};
}

// ---------------------------------------------------------------------------

mpq_class siegel_lambda_lb(const siegel_point& tau) {
    long g = tau.g;
    arg_check(g >= 1 && (long)tau.tau.size() == g * g, "siegel_lambda_lb: shape");
    qmat S(g, g);
    for (long i = 0; i < g; ++i)
        for (long j = 0; j < g; ++j)
            S.at(i, j) =
                (bf_to_q(tau.at(i, j).im) + bf_to_q(tau.at(j, i).im)) / 2;
    // double estimate of the smallest eigenvalue by bisection on det(S - tI)
    long n = g;
    std::vector<double> Sd(n * n);
    for (long i = 0; i < n; ++i)
        for (long j = 0; j < n; ++j) Sd[i * n + j] = S.at(i, j).get_d();
    auto detd = [&](double t) {
        std::vector<double> M = Sd;
        for (long i = 0; i < n; ++i) M[i * n + i] -= t;
        double det = 1;
        for (long k = 0; k < n; ++k) {
            long piv = k;
            for (long i = k + 1; i < n; ++i)
                if (std::fabs(M[i * n + k]) > std::fabs(M[piv * n + k])) piv = i;
            if (M[piv * n + k] == 0) return 0.0;
            if (piv != k) {
                for (long j = 0; j < n; ++j) std::swap(M[k * n + j], M[piv * n + j]);
                det = -det;
            }
            det *= M[k * n + k];
            for (long i = k + 1; i < n; ++i) {
                double f = M[i * n + k] / M[k * n + k];
                for (long j = k; j < n; ++j) M[i * n + j] -= f * M[k * n + j];
            }
        }
        return det;
    };
    double lo = Sd[0], hi = Sd[0];
    for (long i = 0; i < n; ++i) {
        double row = 0;
        for (long j = 0; j < n; ++j)
            if (j != i) row += std::fabs(Sd[i * n + j]);
        lo = std::min(lo, Sd[i * n + i] - row);
        hi = std::min(hi, Sd[i * n + i]);
    }
    lo -= 1;
    if (detd(lo) <= 0) return 0;  // conservative: estimate failed
    for (int it = 0; it < 200; ++it) {
        double mid = (lo + hi) / 2;
        if (detd(mid) > 0)
            lo = mid;
        else
            hi = mid;
    }
    if (!(lo > 0)) return 0;
    mpq_class cand(lo * 0.875);
    for (int tries = 0; tries < 90; ++tries) {
        if (cand <= 0) return 0;
        if (shifted_pd(S, cand)) return cand;
        cand /= 2;
    }
    return 0;
}

void siegel_check(const siegel_point& tau) {
    long g = tau.g;
    arg_check(g >= 1 && (long)tau.tau.size() == g * g, "siegel_check: shape");
    long p = tau.prec();
    // symmetry of midpoints within 2^{-prec/2} plus the radii
    for (long i = 0; i < g; ++i)
        for (long j = i + 1; j < g; ++j) {
            bigfloat tol(64);
            mpfr_set_ui_2exp(tol, 1, -(p / 2), MPFR_RNDU);
            mpfr_add(tol, tol, tau.at(i, j).err, MPFR_RNDU);
            mpfr_add(tol, tol, tau.at(j, i).err, MPFR_RNDU);
            bigfloat d = bc_dist_ub(tau.at(i, j), tau.at(j, i));
            mpfr_sub(d, d, tau.at(i, j).err, MPFR_RNDN);
            mpfr_sub(d, d, tau.at(j, i).err, MPFR_RNDN);
            arg_check(mpfr_cmp(d, tol) <= 0, "siegel_check: tau not symmetric");
        }
    mpq_class lam = siegel_lambda_lb(tau);
    mpq_class errsum = 0;
    for (const auto& z : tau.tau) errsum += bf_to_q(z.err);
    arg_check(lam > errsum, "siegel_check: Im tau not certified positive definite");
}

// ---------------------------------------------------------------------------

std::vector<bigcomplex> poly_roots(const std::vector<mpq_class>& poly, long prec) {
    long d = pdeg(poly);
    arg_check(d >= 1, "poly_roots: degree >= 1");
    arg_check(poly[d] == 1, "poly_roots: monic");
    long p2 = prec + 64;
    std::vector<bigcomplex> cf(d + 1);
    for (long i = 0; i <= d; ++i) cf[i] = bc_from_q(poly[i], 0, p2);
    auto eval = [&](const bigcomplex& z) {
        bigcomplex r(p2);
        for (long k = d; k >= 0; --k) r = bc_add(bc_mul(r, z), cf[k]);
        return r;
    };
    auto evald = [&](const bigcomplex& z) {
        bigcomplex r(p2);
        for (long k = d; k >= 1; --k)
            r = bc_add(bc_mul(r, z), bc_scale_q(k, cf[k]));
        return r;
    };
    // Durand-Kerner from spiral starting points, midpoint iteration
    std::vector<bigcomplex> z(d);
    for (long j = 0; j < d; ++j) {
        bigcomplex seed = bc_from_d(0.4, 0.9, p2);
        z[j] = bc_pow_ui(seed, j + 1);
    }
    for (long it = 0; it < 1200; ++it) {
        double maxstep = 0;
        for (long j = 0; j < d; ++j) {
            bigcomplex den = bc_from_q(1, 0, p2);
            for (long k = 0; k < d; ++k)
                if (k != j) den = bc_mul(den, bc_sub(z[j], z[k]));
            if (mpfr_sgn(bc_abs_lb(den).v) <= 0) {
                // colliding iterates: nudge apart and retry
                z[j] = bc_mid(bc_add(z[j], bc_from_d(7e-4, 3e-4, p2)));
                maxstep = 1;
                continue;
            }
            bigcomplex step = bc_div(eval(z[j]), den);
            z[j] = bc_mid(bc_sub(z[j], step));
            maxstep = std::max(maxstep, std::abs(step.to_complex_d()));
        }
        if (maxstep != 0 && std::log2(maxstep) < -(double)(prec + 40)) break;
        if (maxstep == 0) break;
    }
    // certify each root by the Newton residual radius
    for (long j = 0; j < d; ++j) {
        bigcomplex pv = eval(z[j]), dv = evald(z[j]);
        bigfloat lb = bc_abs_lb(dv);
        if (mpfr_sgn(lb.v) <= 0) throw precision_error("poly_roots: clustered roots");
        bigfloat rad(32);
        mpfr_div(rad, bc_abs_ub(pv), lb, MPFR_RNDU);
        mpfr_mul_ui(rad, rad, 4, MPFR_RNDU);
        mpfr_set(z[j].err.v, rad, MPFR_RNDU);
    }
    // order by (Re, Im); equal real parts (conjugate pairs) are detected by
    // ball overlap so the order is stable across precisions
    std::sort(z.begin(), z.end(), [](const bigcomplex& a, const bigcomplex& b) {
        bigfloat ahi(64), blo(64), bhi(64), alo(64);
        mpfr_add(ahi, a.re, a.err, MPFR_RNDU);
        mpfr_sub(blo, b.re, b.err, MPFR_RNDD);
        if (mpfr_cmp(ahi, blo) < 0) return true;
        mpfr_add(bhi, b.re, b.err, MPFR_RNDU);
        mpfr_sub(alo, a.re, a.err, MPFR_RNDD);
        if (mpfr_cmp(bhi, alo) < 0) return false;
        return mpfr_cmp(a.im.v, b.im.v) < 0;
    });
    // separation: the certified disks must be pairwise disjoint
    for (long i = 0; i < d; ++i)
        for (long j = i + 1; j < d; ++j) {
            bigfloat dd(32), dr(32), di(32);
            mpfr_sub(dr, z[i].re, z[j].re, MPFR_RNDZ);
            mpfr_sub(di, z[i].im, z[j].im, MPFR_RNDZ);
            mpfr_hypot(dd, dr, di, MPFR_RNDD);
            mpfr_sub(dd, dd, z[i].err, MPFR_RNDD);
            mpfr_sub(dd, dd, z[j].err, MPFR_RNDD);
            logic_check(mpfr_sgn(dd.v) > 0, "poly_roots: root disks overlap");
        }
    return z;
}

std::vector<mpq_class> conj_poly(const std::vector<mpq_class>& minpoly, long prec) {
    long d = pdeg(minpoly);
    arg_check(d >= 2 && d % 2 == 0, "conj_poly: even degree >= 2");
    for (long attempt = 0; attempt < 2; ++attempt) {
        long wp = prec * (attempt + 1) + 64;
        std::vector<bigcomplex> r = poly_roots(minpoly, wp);
        // Vandermonde solve: c(r_i) = conj(r_i)
        cmat V(d, d, wp);
        std::vector<bigcomplex> rhs(d);
        for (long i = 0; i < d; ++i) {
            bigcomplex pw = bc_from_q(1, 0, wp);
            for (long j = 0; j < d; ++j) {
                V.at(i, j) = pw;
                pw = bc_mid(bc_mul(pw, r[i]));
            }
            rhs[i] = bc_conj(r[i]);
        }
        qpoly c(d, 0);
        bool ok = true;
        try {
            cmat Vi = cm_inv(V);
            mpz_class max_den = 1;
            max_den <<= 48;
            for (long j = 0; j < d && ok; ++j) {
                bigcomplex cj(wp);
                for (long i = 0; i < d; ++i)
                    cj = bc_add(cj, bc_mul(Vi.at(j, i), rhs[i]));
                double im = std::abs(cj.to_complex_d().imag());
                if (im > std::ldexp(1.0, -(int)std::min(prec / 2, 400L))) ok = false;
                if (ok) c[j] = q_reconstruct(bf_to_q(cj.re), max_den);
            }
        } catch (const precision_error&) {
            ok = false;
        }
        if (!ok) continue;
        // exact verification: m | m(c(x)), c an involution, c != x
        qpoly comp = pcompose_mod(minpoly, c, minpoly);
        bool zero = std::all_of(comp.begin(), comp.end(),
                                [](const mpq_class& q) { return q == 0; });
        qpoly invol = pcompose_mod(c, c, minpoly);
        qpoly idx(d, 0);
        if (d >= 2) idx[1] = 1;
        bool isid = ptrim(c) == ptrim(idx);
        if (zero && ptrim(invol) == ptrim(idx) && !isid) return c;
    }
    throw precision_error("conj_poly: could not certify the conjugation");
}

mpq_class field_trace(const std::vector<mpq_class>& minpoly,
                      const std::vector<mpq_class>& elem) {
    long d = pdeg(minpoly);
    arg_check(d >= 1 && minpoly[d] == 1, "field_trace: monic modulus");
    qpoly e = pmod(elem, minpoly);
    std::vector<mpq_class> ps = power_sums(minpoly, d - 1);
    mpq_class t = 0;
    for (long k = 0; k < d; ++k) t += e[k] * ps[k];
    return t;
}

bigcomplex cm_embed(const cm_data& data, const std::vector<mpq_class>& elem,
                    long k, long prec) {
    std::vector<bigcomplex> r = poly_roots(data.minpoly, prec);
    arg_check(k >= 0 && k < (long)r.size(), "cm_embed: root index");
    qpoly e = pmod(elem, data.minpoly);
    bigcomplex v(prec);
    for (long i = pdeg(e); i >= 0; --i)
        v = bc_add(bc_mul(v, r[k]), bc_from_q(e[i], 0, prec));
    return v;
}

zmat riemann_form_cm(const cm_data& data, long prec) {
    long d = pdeg(data.minpoly);
    arg_check(d >= 2 && d % 2 == 0 && data.minpoly[d] == 1,
              "riemann_form_cm: monic even-degree polynomial");
    long g = d / 2;
    arg_check((long)data.basis.size() == d, "riemann_form_cm: basis size 2g");
    arg_check((long)data.phi.size() == g, "riemann_form_cm: CM type size g");
    arg_check(data.n >= 1, "riemann_form_cm: positive scaling");

    qpoly sigma = conj_poly(data.minpoly, prec);
    std::vector<bigcomplex> roots = poly_roots(data.minpoly, prec);

    // the CM type must select pairwise non-conjugate embeddings
    for (long a = 0; a < g; ++a) {
        arg_check(data.phi[a] >= 0 && data.phi[a] < d, "riemann_form_cm: root index");
        for (long b = 0; b < g; ++b) {
            bigcomplex cb = bc_conj(roots[data.phi[b]]);
            if (a == b) continue;
            // the conjugate root ball must be disjoint from the phi_a ball
            bigfloat dd(32), dr(32), di(32);
            mpfr_sub(dr, roots[data.phi[a]].re, cb.re, MPFR_RNDZ);
            mpfr_sub(di, roots[data.phi[a]].im, cb.im, MPFR_RNDZ);
            mpfr_hypot(dd, dr, di, MPFR_RNDD);
            mpfr_sub(dd, dd, roots[data.phi[a]].err, MPFR_RNDD);
            mpfr_sub(dd, dd, cb.err, MPFR_RNDD);
            arg_check(mpfr_sgn(dd.v) > 0,
                      "riemann_form_cm: CM type contains a conjugate pair");
        }
    }
    // positivity Im(phi_i(e)) > 0 with margin beyond the ball radius
    for (long a = 0; a < g; ++a) {
        bigcomplex ev = cm_embed(data, data.e, data.phi[a], prec);
        bigfloat lo(32);
        mpfr_sub(lo, ev.im, ev.err, MPFR_RNDD);
        arg_check(mpfr_sgn(lo.v) > 0, "riemann_form_cm: e fails positivity");
    }

    zmat E(d, d);
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) {
            qpoly bj = pcompose_mod(data.basis[j], sigma, data.minpoly);
            qpoly prod = pmulmod(data.e, pmulmod(data.basis[i], bj, data.minpoly),
                                 data.minpoly);
            mpq_class t = data.n * field_trace(data.minpoly, prod);
            arg_check(t.get_den() == 1, "riemann_form_cm: n psi not integral on basis");
            E.at(i, j) = t.get_num();
        }
    logic_check(zm_transpose(E) == zm_neg(E), "riemann_form_cm: not alternating");
    arg_check(zm_det(E) != 0, "riemann_form_cm: degenerate form");
    return E;
}

// ---------------------------------------------------------------------------

siegel_point tau_from_basis(const std::vector<std::vector<bigcomplex>>& rows,
                            const type_delta& delta) {
    long g = delta.g();
    arg_check((long)rows.size() == 2 * g, "tau_from_basis: need 2g rows");
    for (const auto& r : rows)
        arg_check((long)r.size() == g, "tau_from_basis: rows of length g");
    long p = rows[0][0].prec();
    cmat V(g, g, p), W(g, g, p);
    for (long i = 0; i < g; ++i)
        for (long j = 0; j < g; ++j) {
            V.at(i, j) = rows[i][j];
            W.at(i, j) = rows[g + i][j];
        }
    cmat T = cm_mul(V, cm_inv(W));
    auto build = [&](int sign) {
        siegel_point tau;
        tau.g = g;
        tau.tau.assign(g * g, bigcomplex(p));
        for (long i = 0; i < g; ++i)
            for (long j = 0; j < g; ++j) {
                bigcomplex v = bc_scale_q(mpq_class(delta.d[j]) * sign, T.at(i, j));
                tau.at(i, j) = v;
            }
        return tau;
    };
    siegel_point tau = build(1);
    if (siegel_lambda_lb(tau) > 0) {
        siegel_check(tau);
        return tau;
    }
    siegel_point flipped = build(-1);
    arg_check(siegel_lambda_lb(flipped) > 0,
              "tau_from_basis: Im tau indefinite under both orientations");
    siegel_check(flipped);
    return flipped;
}

gsp_element gsp_make(const qmat& M, const type_delta& delta) {
    long g = delta.g();
    arg_check(M.r == 2 * g && M.c == 2 * g, "gsp_make: shape 2g x 2g");
    qmat J = qm_from_z(j_delta(delta));
    qmat L = qm_mul(qm_mul(M, J), qm_transpose(M));
    mpq_class nu = L.at(0, g) / J.at(0, g);
    arg_check(nu > 0, "gsp_make: multiplier must be positive");
    qmat R = qm_scale(J, nu);
    arg_check(L == R, "gsp_make: M J M^t != nu J");
    return {M, nu};
}

siegel_point gsp_act(const gsp_element& alpha, const siegel_point& tau,
                     const type_delta& delta) {
    long g = delta.g();
    arg_check(tau.g == g, "gsp_act: genus mismatch");
    long p = tau.prec();
    const qmat& M = alpha.M;
    // N1 = a tau + b D, N2 = c tau + d D  (D = diag delta)
    cmat N1(g, g, p), N2(g, g, p);
    for (long i = 0; i < g; ++i)
        for (long j = 0; j < g; ++j) {
            bigcomplex s1(p), s2(p);
            for (long k = 0; k < g; ++k) {
                s1 = bc_add(s1, bc_scale_q(M.at(i, k), tau.at(k, j)));
                s2 = bc_add(s2, bc_scale_q(M.at(g + i, k), tau.at(k, j)));
            }
            mpq_class dj(delta.d[j]);
            s1 = bc_add(s1, bc_from_q(M.at(i, g + j) * dj, 0, p));
            s2 = bc_add(s2, bc_from_q(M.at(g + i, g + j) * dj, 0, p));
            N1.at(i, j) = s1;
            N2.at(i, j) = s2;
        }
    cmat T = cm_mul(N1, cm_inv(N2));
    siegel_point out;
    out.g = g;
    out.tau.assign(g * g, bigcomplex(p));
    for (long i = 0; i < g; ++i)
        for (long j = 0; j < g; ++j)
            out.at(i, j) = bc_scale_q(mpq_class(delta.d[j]), T.at(i, j));
    return out;
}

// ---------------------------------------------------------------------------

g1_frame make_g1_frame(const quad_field& F, long n, long prec) {
    arg_check(n >= 1, "make_g1_frame: positive scaling");
    g1_frame fr;
    fr.F = F;
    fr.n = n;
    // e = (conj(omega) - omega)^{-1}: totally imaginary, Im phi(e) > 0
    quad_elem diff{mpq_class(F.omega_tr), mpq_class(-2)};
    fr.e = qe_inv(F, diff);
    fr.basis = {quad_elem{1, 0}, quad_elem{0, 1}};
    zmat E(2, 2);
    for (long i = 0; i < 2; ++i)
        for (long j = 0; j < 2; ++j) {
            quad_elem pr = qe_mul(F, fr.e, qe_mul(F, fr.basis[i], qe_conj(F, fr.basis[j])));
            mpq_class t = n * qe_trace(F, pr);
            logic_check(t.get_den() == 1, "make_g1_frame: form not integral");
            E.at(i, j) = t.get_num();
        }
    fr.E = E;
    frobenius_result red = frobenius_reduce(E);
    fr.delta = red.delta;
    logic_check(red.delta.d == std::vector<mpz_class>{n}, "make_g1_frame: type not [n]");
    // phi(1) and phi(omega) as one-dimensional lattice rows, in the reduced
    // symplectic order
    bigcomplex phi1 = bc_from_q(1, 0, prec);
    bigcomplex phiw(prec);
    mpfr_set_si(phiw.re, F.omega_tr, MPFR_RNDN);
    mpfr_div_2si(phiw.re, phiw.re, 1, MPFR_RNDN);
    mpfr_set_si(phiw.im, 4 * F.omega_nm - F.omega_tr * F.omega_tr, MPFR_RNDN);
    mpfr_sqrt(phiw.im, phiw.im, MPFR_RNDN);
    mpfr_div_2si(phiw.im, phiw.im, 1, MPFR_RNDN);
    bc_widen_2exp(phiw, mpfr_get_exp(phiw.im) + 2 - prec);
    std::vector<std::vector<bigcomplex>> rows(2);
    for (long i = 0; i < 2; ++i) {
        bigcomplex v(prec);
        mpz_class c1 = red.U.at(i, 0), cw = red.U.at(i, 1);
        v = bc_add(bc_scale_q(mpq_class(c1), phi1), bc_scale_q(mpq_class(cw), phiw));
        rows[i] = {v};
    }
    fr.tau = tau_from_basis(rows, fr.delta);
    return fr;
}

g1_idele decompose_idele_g1(const quad_field& F, const quad_ideal& s, long N) {
    arg_check(N >= 1, "decompose_idele_g1: N >= 1");
    arg_check(!s.is_zero() && qi_is_integral(s), "decompose_idele_g1: integral ideal");
    arg_check(qi_coprime(F, s, qi_from_z(F, N)), "decompose_idele_g1: s coprime to N");
    // rows of A: the frame (-a, b + c omega) of s over the frame (-1, omega);
    // both frames carry the orientation flip that tau_from_basis applies, so
    // gsp_act(alpha, tau_E) lands on the tau of the s-lattice directly
    zmat A(2, 2);
    A.at(0, 0) = s.a;
    A.at(0, 1) = 0;
    A.at(1, 0) = -s.b;
    A.at(1, 1) = s.c;
    mpz_class det = zm_det(A);  // = a c > 0 by the HNF normalization
    logic_check(det == qi_norm(F, s), "decompose_idele_g1: det != N(s)");
    type_delta delta;
    delta.d = {4};
    gsp_element alpha = gsp_make(qm_from_z(A), delta);
    // finite part: u = alpha^{-1} mod N = det^{-1} adj(A) mod N
    mpz_class Nz(N), dinv;
    logic_check(mpz_invert(dinv.get_mpz_t(), det.get_mpz_t(), Nz.get_mpz_t()) != 0,
                "decompose_idele_g1: N(s) not invertible mod N");
    zmat u(2, 2);
    auto md = [&](const mpz_class& x) {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), x.get_mpz_t(), Nz.get_mpz_t());
        return r;
    };
    u.at(0, 0) = md(dinv * A.at(1, 1));
    u.at(0, 1) = md(-dinv * A.at(0, 1));
    u.at(1, 0) = md(-dinv * A.at(1, 0));
    u.at(1, 1) = md(dinv * A.at(0, 0));
    mpz_class du = md(zm_det(u) - dinv);
    logic_check(du == 0, "decompose_idele_g1: u determinant mismatch");
    return {u, alpha};
}

}  // namespace drwitt
