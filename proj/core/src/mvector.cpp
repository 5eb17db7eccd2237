#include "drwitt/mvector.hpp"

#define MPFR_USE_NO_MACRO
#include <mpfr.h>

#include <algorithm>
#include <array>

#include "drwitt/classical.hpp"
#include "drwitt/intmat.hpp"
#include "drwitt/symplectic.hpp"

namespace drwitt {

namespace {

mpq_class frac_part(const mpq_class& x) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    return x - fl;
}

// multiplication by t as a row-action matrix on coordinates in the oriented
// frame (-1, omega): row i holds the coordinates of t * e_i
std::array<mpq_class, 4> mul_matrix(const quad_field& F, const quad_elem& t) {
    // t(-1) = tx (-1) + (-ty) omega
    // t omega = (nm ty) (-1) + (tx + tr ty) omega
    return {t.x, -t.y, F.omega_nm * t.y, t.x + F.omega_tr * t.y};
}

// index transport a -> a M mod Z^2 (row vector times matrix)
std::array<mpq_class, 2> row_apply(const std::array<mpq_class, 2>& a,
                                   const std::array<mpq_class, 4>& M) {
    return {frac_part(a[0] * M[0] + a[1] * M[2]),
            frac_part(a[0] * M[1] + a[1] * M[3])};
}

// multiplier of s with residue 1 mod N: (a_s^{-1} mod N) a_s, using that the
// HNF entry a_s = min(s cap Z_{>0}) is coprime to N whenever N(s) is
quad_elem match_multiplier(const quad_ideal& s, long N) {
    mpz_class w, Nz(N);
    logic_check(mpz_invert(w.get_mpz_t(), s.a.get_mpz_t(), Nz.get_mpz_t()) != 0,
                "match_multiplier: s not coprime to the level");
    return {mpq_class(w * s.a), 0};
}

// exact coordinates of x over the HNF basis (a, b + c omega) of s
std::array<mpq_class, 2> hnf_coords(const quad_ideal& s, const quad_elem& x) {
    mpq_class q = mpq_class(x.y) / s.c;
    mpq_class p = mpq_class(x.x - q * s.b) / s.a;
    mpq_canonicalize(q.get_mpq_t());
    mpq_canonicalize(p.get_mpq_t());
    return {p, q};
}

type_delta frame_type() {
    type_delta d;
    d.d = {4};
    return d;
}

// tau of the ideal lattice in the oriented frame (-f1, f2)
siegel_point ideal_tau(const quad_field& F, const quad_ideal& s, long prec) {
    quad_elem f1{mpq_class(s.a), 0}, f2{mpq_class(s.b), mpq_class(s.c)};
    std::vector<std::vector<bigcomplex>> rows(2);
    rows[0] = {bc_neg(qe_embed(F, f1, prec))};
    rows[1] = {qe_embed(F, f2, prec)};
    return tau_from_basis(rows, frame_type());
}

bigcomplex theta_terms_value(const std::vector<ratio_term>& terms,
                             const torsion_index& a, const siegel_point& tau,
                             long prec) {
    type_delta delta = frame_type();
    bigcomplex acc(prec);
    for (const ratio_term& t : terms)
        acc = bc_add(acc, bc_scale_q(t.coef, theta_ratio(t.k, t.l, a, tau, delta, prec)));
    return acc;
}

bool ball_close(const bigcomplex& A, const bigcomplex& B, long mult) {
    bigfloat dist = bc_dist_ub(A, B);
    bigfloat rad(64);
    mpfr_add(rad, A.err, B.err, MPFR_RNDU);
    mpfr_mul_si(rad, rad, mult, MPFR_RNDU);
    return mpfr_cmp(dist, rad) <= 0;
}

bool values_equal(const witt_component& A, const witt_component& B) {
    const auto& pa = A.value.minpoly;
    const auto& pb = B.value.minpoly;
    if (!pa.empty() && !pb.empty()) {
        if (pa != pb) {
            if (ball_close(A.approx, B.approx, 4))
                throw precision_error(
                    "value_ids: distinct recognized values numerically too "
                    "close; refine precision");
            return false;
        }
        if (A.value.degree() == 1) return true;  // same rational value
        return ball_close(A.approx, B.approx, 2);  // same conjugate or not
    }
    return ball_close(A.approx, B.approx, 2);
}

}  // namespace

mvector_spec make_fricke_spec(long N) {
    arg_check(N >= 1, "make_fricke_spec: N >= 1");
    mvector_spec s;
    s.f = selector_kind::fricke;
    s.a = make_torsion({0, 0}, N);
    return s;
}

mvector_spec make_weber_spec(std::vector<mpq_class> a, long N) {
    mvector_spec s;
    s.f = selector_kind::weber;
    s.a = make_torsion(std::move(a), N);
    return s;
}

mvector_spec make_theta_spec(std::vector<mpq_class> a, long N,
                             std::vector<ratio_term> terms) {
    arg_check(!terms.empty(), "make_theta_spec: at least one term");
    mvector_spec s;
    s.f = selector_kind::theta;
    s.a = make_torsion(std::move(a), N);
    s.terms = std::move(terms);
    return s;
}

bool spec_defined(const adelic_level& L, const mvector_spec& spec, long prec) {
    if (spec.f != selector_kind::theta) return true;
    const quad_field& F = L.field();
    long N = L.level();
    g1_frame fr = make_g1_frame(F, 4, prec);
    type_delta delta = frame_type();
    for (long x = 0; x < N; ++x)
        for (long y = 0; y < N; ++y) {
            quad_elem lift{x, y};
            auto idx = row_apply({spec.a.a[0], spec.a.a[1]}, mul_matrix(F, lift));
            torsion_index ai = make_torsion({idx[0], idx[1]}, N);
            for (const ratio_term& t : spec.terms) {
                try {
                    theta_ratio(t.k, t.l, ai, fr.tau, delta, prec);
                } catch (const pole_error&) {
                    return false;
                }
            }
        }
    return true;
}

bigcomplex evaluate_component(const adelic_level& L, const mvector_spec& spec,
                              const residue_ring::res& rho, const quad_ideal& s,
                              long prec, bool* renormalized) {
    const quad_field& F = L.field();
    long N = L.level();
    arg_check(qi_is_integral(s) && !s.is_zero(), "evaluate_component: integral s");
    arg_check(qi_coprime(F, s, qi_from_z(F, N)),
              "evaluate_component: s coprime to the level");
    if (renormalized) *renormalized = false;

    // torsion point of the index on the oriented frame, moved by the residue
    // and matched into N^{-1} s / s
    quad_elem xa{-spec.a.a[0], spec.a.a[1]};
    quad_elem xp = qe_mul(F, L.canonical_lift(rho), xa);
    quad_elem xs = qe_mul(F, match_multiplier(s, N), xp);
    auto pq = hnf_coords(s, xs);
    bool on_lattice = pq[0].get_den() == 1 && pq[1].get_den() == 1;

    long wp = prec + 64;
    quad_elem f1{mpq_class(s.a), 0}, f2{mpq_class(s.b), mpq_class(s.c)};

    if (spec.f == selector_kind::theta) {
        torsion_index ai = make_torsion({frac_part(-pq[0]), frac_part(pq[1])}, N);
        return theta_terms_value(spec.terms, ai, ideal_tau(F, s, wp), prec);
    }
    if (spec.f == selector_kind::fricke || on_lattice) {
        if (renormalized) *renormalized = true;
        return j_from_basis(qe_embed(F, f1, wp), qe_embed(F, f2, wp), prec);
    }
    return weber_value(qe_embed(F, xs, wp), qe_embed(F, f1, wp),
                       qe_embed(F, f2, wp), weber_kind_for(F), prec);
}

witt_vector build_modular_vector(const adelic_level& L, const mvector_spec& spec,
                                 long prec, const recog_config& recog) {
    if (spec.f == selector_kind::theta)
        arg_check(spec_defined(L, spec, prec),
                  "build_modular_vector: selector has a pole at some residue");
    const dr_monoid& T = L.monoid();
    const quad_field& F = L.field();
    long N = L.level();
    witt_vector v;
    v.spec = spec;
    v.comp.resize(T.size());
    v.all_recognized = true;
    v.rep_independent = true;
    for (long i = 0; i < T.size(); ++i) {
        adelic_pair pr = L.encode(i);
        quad_ideal s = L.level_group().class_rep(pr.s);
        bool flag = false, flag2 = false;
        bigcomplex val = evaluate_component(L, spec, pr.rho, s, prec, &flag);
        // recompute over a second representative: the ray-trivial principal
        // multiplier N + 1 changes the ideal but may not change the value
        quad_ideal s2 = qi_mul(F, s, qi_from_z(F, N + 1));
        bigcomplex val2 = evaluate_component(L, spec, pr.rho, s2, prec, &flag2);
        if (flag != flag2 || !ball_close(val, val2, 2)) v.rep_independent = false;
        witt_component& c = v.comp[i];
        c.approx = val;
        c.renormalized = flag;
        c.value = recognize(val, recog);
        if (!c.value.recognized()) v.all_recognized = false;
    }
    return v;
}

std::vector<orbit_report> verify_equivariance(const adelic_level& L,
                                              const witt_vector& v, long prec) {
    const dr_monoid& T = L.monoid();
    const quad_field& F = L.field();
    arg_check((long)v.comp.size() == T.size(), "verify_equivariance: vector size");
    recog_config cfg;
    cfg.maxdeg = 2;
    cfg.prec = prec;
    std::vector<char> seen(T.size(), 0);
    std::vector<orbit_report> out;
    long wp = prec + 32;
    for (long i = 0; i < T.size(); ++i) {
        if (seen[i]) continue;
        orbit_report rep;
        for (long u : T.units()) {
            long j = T.mul(u, i);
            if (!seen[j]) {
                seen[j] = 1;
                rep.members.push_back(j);
            }
        }
        std::sort(rep.members.begin(), rep.members.end());
        // orbit characteristic polynomial, constant term first
        std::vector<bigcomplex> poly{bc_from_q(1, 0, wp)};
        for (long j : rep.members) {
            bigcomplex z = bc_at_prec(v.comp[j].approx, wp);
            std::vector<bigcomplex> nxt(poly.size() + 1, bigcomplex(wp));
            for (size_t t = 0; t < poly.size(); ++t) {
                nxt[t + 1] = bc_add(nxt[t + 1], poly[t]);
                nxt[t] = bc_sub(nxt[t], bc_mul(poly[t], z));
            }
            poly = nxt;
        }
        rep.pass = true;
        for (size_t t = 0; t + 1 < poly.size(); ++t) {
            algebraic_value av = recognize(poly[t], cfg);
            if (!av.recognized() || !as_field_element(F, av).has_value())
                rep.pass = false;
        }
        out.push_back(rep);
    }
    return out;
}

witt_vector lambda_action(const adelic_level& L, const witt_vector& v,
                          const quad_ideal& p) {
    std::vector<long> tr = L.monoid().translation_by(p);
    arg_check(v.comp.size() == tr.size(), "lambda_action: vector size");
    witt_vector out;
    out.spec = v.spec;
    out.all_recognized = v.all_recognized;
    out.rep_independent = v.rep_independent;
    out.comp.resize(v.comp.size());
    for (size_t i = 0; i < v.comp.size(); ++i) out.comp[i] = v.comp[tr[i]];
    return out;
}

frobenius_report frobenius_congruence_check(const adelic_level& L,
                                            const witt_vector& v,
                                            const quad_ideal& p) {
    const quad_field& F = L.field();
    auto fac = factor_ideal(F, p);
    arg_check(fac.size() == 1 && fac.front().second == 1,
              "frobenius_congruence_check: p must be prime");
    mpq_class nn = qi_norm(F, p);
    logic_check(nn.get_den() == 1, "frobenius_congruence_check: integral norm");
    mpz_class Np = nn.get_num();
    std::vector<long> tr = L.monoid().translation_by(p);

    frobenius_report rep;
    size_t n = v.comp.size();
    std::vector<std::optional<quad_elem>> ex(n);
    mpz_class D = 1;
    for (size_t i = 0; i < n; ++i) {
        ex[i] = as_field_element(F, v.comp[i].value);
        if (ex[i]) {
            mpz_class l;
            mpz_lcm(l.get_mpz_t(), mpq_class(ex[i]->x).get_den_mpz_t(),
                    mpq_class(ex[i]->y).get_den_mpz_t());
            mpz_lcm(D.get_mpz_t(), D.get_mpz_t(), l.get_mpz_t());
        }
    }
    rep.denominator = D;
    // the declared denominator must not absorb the modulus
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), D.get_mpz_t(), p.a.get_mpz_t());
    bool d_ok = g == 1;

    rep.conclusive = d_ok;
    rep.all_pass = true;
    mpz_class Dp;
    mpz_pow_ui(Dp.get_mpz_t(), D.get_mpz_t(), mpz_get_ui(Np.get_mpz_t()));
    for (size_t i = 0; i < n; ++i) {
        component_report cr;
        cr.index = (long)i;
        cr.exact = d_ok && ex[i].has_value() && ex[tr[i]].has_value();
        if (cr.exact) {
            quad_elem d = qe_sub(*ex[tr[i]],
                                 qe_pow(F, *ex[i], mpz_get_ui(Np.get_mpz_t())));
            quad_elem ds = qe_mul(F, quad_elem{mpq_class(Dp), 0}, d);
            logic_check(qe_is_integral(ds),
                        "frobenius_congruence_check: cleared difference not integral");
            mpq_class nm = qe_norm(F, ds);
            cr.pass = mpz_divisible_p(nm.get_num_mpz_t(), Np.get_mpz_t()) != 0;
        } else {
            rep.conclusive = false;
            cr.pass = false;
        }
        if (!cr.pass) rep.all_pass = false;
        rep.comp.push_back(cr);
    }
    return rep;
}

std::vector<long> value_ids(const witt_vector& v) {
    long n = (long)v.comp.size();
    std::vector<long> id(n, -1);
    long next = 0;
    for (long i = 0; i < n; ++i) {
        if (id[i] >= 0) continue;
        id[i] = next;
        for (long j = i + 1; j < n; ++j)
            if (id[j] < 0 && values_equal(v.comp[i], v.comp[j])) id[j] = next;
        ++next;
    }
    return id;
}

partition congruence_of_vector(const adelic_level& L, const witt_vector& v) {
    return vector_congruence(L.monoid(), {value_ids(v)});
}

simn_report compare_with_simn(const adelic_level& L,
                              const std::vector<witt_vector>& family) {
    arg_check(!family.empty(), "compare_with_simn: empty family");
    std::vector<std::vector<long>> xi;
    xi.reserve(family.size());
    for (const witt_vector& v : family) xi.push_back(value_ids(v));
    simn_report rep;
    rep.join = vector_congruence(L.monoid(), xi);
    rep.simn = L.sim_n_congruence();
    rep.equal = same_partition(rep.join, rep.simn);
    return rep;
}

crosscheck_report crosscheck_theta_path(const adelic_level& L,
                                        const mvector_spec& spec,
                                        const residue_ring::res& rho,
                                        const quad_ideal& s, long prec) {
    arg_check(spec.f != selector_kind::weber,
              "crosscheck_theta_path: fricke or theta selector");
    const quad_field& F = L.field();
    long N = L.level();
    crosscheck_report rep;
    rep.lattice = evaluate_component(L, spec, rho, s, prec);

    long wp = prec + 64;
    g1_frame fr = make_g1_frame(F, 4, wp);
    g1_idele dec = decompose_idele_g1(F, s, N);
    siegel_point tau_s = gsp_act(dec.alpha, fr.tau, fr.delta);
    // index transport a'' = a . M_rho . u as row vectors mod Z^2
    auto b = row_apply({spec.a.a[0], spec.a.a[1]},
                       mul_matrix(F, L.canonical_lift(rho)));
    std::array<mpq_class, 4> U = {mpq_class(dec.u.at(0, 0)), mpq_class(dec.u.at(0, 1)),
                                  mpq_class(dec.u.at(1, 0)), mpq_class(dec.u.at(1, 1))};
    auto c = row_apply(b, U);
    if (spec.f == selector_kind::fricke) {
        // the frame lattice is Z tau + 4 Z, so the normalized period is tau/4
        rep.idele = j_from_theta(bc_scale_q(mpq_class(1, 4), tau_s.at(0, 0)), prec);
    } else {
        torsion_index ai = make_torsion({c[0], c[1]}, N);
        rep.idele = theta_terms_value(spec.terms, ai, tau_s, prec);
    }
    rep.pass = bc_close_2exp(rep.lattice, rep.idele, -(prec - 12));
    return rep;
}

}  // namespace drwitt
