#include "drwitt/drmonoid.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace drwitt {

bool dr_congruent(const quad_field& F, const quad_ideal& A, const quad_ideal& B,
                  const quad_ideal& f) {
    arg_check(!A.is_zero() && !B.is_zero() && !f.is_zero(), "dr_congruent: nonzero ideals");
    arg_check(qi_is_integral(A) && qi_is_integral(B) && qi_is_integral(f),
              "dr_congruent: integral ideals");
    auto g = is_principal(F, qi_div(F, A, B));
    if (!g) return false;
    quad_ideal fb = qi_mul(F, f, qi_inv(F, B));
    quad_elem u = qe_unit_gen(F), t = *g;
    for (long k = 0; k < F.unit_order(); ++k) {
        if (qi_contains(F, fb, qe_sub(t, {1, 0}))) return true;
        t = qe_mul(F, t, u);
    }
    return false;
}

dr_monoid::dr_monoid(const quad_field& F, const quad_ideal& f, long norm_budget)
    : F_(F), f_(f) {
    arg_check(!f.is_zero() && qi_is_integral(f), "dr_monoid: integral nonzero conductor");
    // divisors of f
    auto fac = factor_ideal(F, f);
    divs_ = {qi_one(F)};
    for (const auto& [P, e] : fac) {
        std::vector<quad_ideal> nxt;
        quad_ideal pw = qi_one(F);
        for (long j = 0; j <= e; ++j) {
            for (const auto& d : divs_) nxt.push_back(qi_mul(F, d, pw));
            pw = qi_mul(F, pw, P);
        }
        divs_ = std::move(nxt);
    }
    std::sort(divs_.begin(), divs_.end(),
              [](const quad_ideal& a, const quad_ideal& b) { return qi_cmp(a, b) < 0; });
    logic_check(divs_.front() == qi_one(F), "dr_monoid: divisor list misses (1)");

    mpz_class target = 0;
    for (const auto& d : divs_) {
        orbits_.push_back(std::make_unique<ray_class_group>(F, qi_div(F, f, d)));
        target += orbits_.back()->order();
    }
    logic_check(target.fits_slong_p(), "dr_monoid: size out of range");
    long tgt = target.get_si();

    if (norm_budget <= 0) {
        mpz_class nf = qi_norm(F_, f_).get_num();
        mpz_class auto_b = 200 + 4 * nf * nf;
        norm_budget = auto_b.fits_slong_p() ? auto_b.get_si() : 1000000;
    }
    // canonical representatives: enumerate by norm, then HNF order
    for (long n = 1; (long)reps_.size() < tgt; ++n) {
        if (n > norm_budget)
            throw budget_error("dr_monoid: enumeration budget exhausted before " +
                               std::to_string(tgt) + " classes");
        for (const auto& I : ideals_of_norm(F, n)) {
            auto key = key_of(I);
            if (index_.count(key)) continue;
            index_[key] = (long)reps_.size();
            reps_.push_back(I);
            orbit_of_.push_back(key.first);
            if ((long)reps_.size() == tgt) break;
        }
    }
    for (long i = 0; i < tgt; ++i)
        if (orbit_of_[i] == 0) units_.push_back(i);
    logic_check((long)units_.size() == orbits_[0]->order().get_si(),
                "dr_monoid: unit class count differs from |C_f|");
    one_ = classify(qi_one(F));

    mul_.assign(tgt, std::vector<long>(tgt));
    for (long i = 0; i < tgt; ++i)
        for (long j = i; j < tgt; ++j)
            mul_[i][j] = mul_[j][i] = classify(qi_mul(F_, reps_[i], reps_[j]));
}

std::pair<long, std::vector<mpz_class>> dr_monoid::key_of(const quad_ideal& a) const {
    arg_check(!a.is_zero() && qi_is_integral(a), "dr_monoid: nonzero integral ideal");
    quad_ideal d = qi_add(F_, a, f_);
    long k = -1;
    for (long t = 0; t < (long)divs_.size(); ++t)
        if (divs_[t] == d) { k = t; break; }
    logic_check(k >= 0, "dr_monoid: gcd with conductor not a listed divisor");
    quad_ideal cop = qi_div(F_, a, d);
    logic_check(qi_is_integral(cop), "dr_monoid: non-integral coprime part");
    return {k, orbits_[k]->dlog(cop)};
}

long dr_monoid::classify(const quad_ideal& a) const {
    auto it = index_.find(key_of(a));
    logic_check(it != index_.end(), "dr_monoid: class missing from table");
    return it->second;
}

std::vector<long> dr_monoid::translation_by(const quad_ideal& p) const {
    std::vector<long> t(size());
    for (long i = 0; i < size(); ++i) t[i] = classify(qi_mul(F_, p, reps_[i]));
    return t;
}

std::vector<long> dr_projection(const dr_monoid& big, const dr_monoid& small) {
    arg_check(big.field().disc == small.field().disc, "dr_projection: different fields");
    arg_check(qi_divides(big.field(), small.conductor(), big.conductor()),
              "dr_projection: small conductor must divide the big one");
    std::vector<long> m(big.size());
    for (long i = 0; i < big.size(); ++i) m[i] = small.classify(big.rep(i));
    return m;
}

partition normalize_partition(const partition& p) {
    partition out(p.size());
    std::map<long, long> seen;
    for (size_t i = 0; i < p.size(); ++i) {
        auto [it, fresh] = seen.emplace(p[i], (long)seen.size());
        out[i] = it->second;
        (void)fresh;
    }
    return out;
}

bool same_partition(const partition& p, const partition& q) {
    return p.size() == q.size() && normalize_partition(p) == normalize_partition(q);
}

partition identity_partition(long n) {
    partition p(n);
    for (long i = 0; i < n; ++i) p[i] = i;
    return p;
}

bool is_monoid_congruence(const dr_monoid& T, const partition& p) {
    arg_check((long)p.size() == T.size(), "is_monoid_congruence: wrong size");
    for (long x = 0; x < T.size(); ++x)
        for (long y = x + 1; y < T.size(); ++y) {
            if (p[x] != p[y]) continue;
            for (long z = 0; z < T.size(); ++z)
                if (p[T.mul(x, z)] != p[T.mul(y, z)] || p[T.mul(z, x)] != p[T.mul(z, y)])
                    return false;
        }
    return true;
}

partition congruence_closure(const dr_monoid& T,
                             const std::vector<std::pair<long, long>>& pairs) {
    std::vector<long> parent(T.size());
    for (long i = 0; i < T.size(); ++i) parent[i] = i;
    std::function<long(long)> find = [&](long x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    auto unite = [&](long a, long b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[std::max(a, b)] = std::min(a, b);
        return true;
    };
    for (auto [a, b] : pairs) unite(a, b);
    bool changed = true;
    while (changed) {
        changed = false;
        for (long x = 0; x < T.size(); ++x)
            for (long y = x + 1; y < T.size(); ++y) {
                if (find(x) != find(y)) continue;
                for (long z = 0; z < T.size(); ++z)
                    if (unite(T.mul(x, z), T.mul(y, z))) changed = true;
            }
    }
    partition p(T.size());
    for (long i = 0; i < T.size(); ++i) p[i] = find(i);
    return normalize_partition(p);
}

partition vector_congruence(const dr_monoid& T, const std::vector<std::vector<long>>& xi) {
    for (const auto& v : xi)
        arg_check((long)v.size() == T.size(), "vector_congruence: wrong vector length");
    std::map<std::vector<long>, long> blocks;
    partition p(T.size());
    for (long x = 0; x < T.size(); ++x) {
        std::vector<long> sig;
        sig.reserve(xi.size() * T.size());
        for (const auto& v : xi)
            for (long z = 0; z < T.size(); ++z) sig.push_back(v[T.mul(x, z)]);
        auto [it, fresh] = blocks.emplace(std::move(sig), (long)blocks.size());
        p[x] = it->second;
        (void)fresh;
    }
    return p;
}

std::vector<std::vector<long>> functions_through(const partition& p) {
    long nb = 0;
    for (long b : p) nb = std::max(nb, b + 1);
    std::vector<std::vector<long>> out(nb, std::vector<long>(p.size(), 0));
    for (size_t i = 0; i < p.size(); ++i) out[p[i]][i] = 1;
    return out;
}

// ---------------------------------------------------------------------------

adelic_level::adelic_level(const quad_field& F, long N)
    : F_(F),
      N_(N),
      fN_(qi_from_z(F, N)),
      M_(std::make_unique<dr_monoid>(F, qi_from_z(F, N))),
      ring_(F, qi_from_z(F, N)) {
    arg_check(N >= 1, "adelic_level: N >= 1");
    logic_check(M_->divisor_list().front() == qi_one(F), "adelic_level: no unit orbit");
    CN_ = &M_->orbit_group(0);
    units_ = ring_.all_units();
}

quad_elem adelic_level::canonical_lift(const residue_ring::res& rho) const {
    if (rho.first == 0 && rho.second == 0) return {mpq_class(N_), 0};
    return ring_.lift(rho);
}

torsion_galois adelic_level::torsion_field(const residue_ring::res& rho) const {
    quad_ideal dbar = qi_add(F_, qi_principal(F_, canonical_lift(rho)), fN_);
    for (long k = 0; k < (long)M_->divisor_list().size(); ++k)
        if (M_->divisor_list()[k] == dbar) return {dbar, &M_->orbit_group(k)};
    throw std::logic_error("torsion_field: gcd not among divisors of (N)");
}

adelic_pair adelic_level::encode(long class_index) const {
    arg_check(class_index >= 0 && class_index < M_->size(), "encode: bad index");
    long k = M_->orbit_of(class_index);
    const quad_ideal& d = M_->divisor_list()[k];
    const ray_class_group& G = M_->orbit_group(k);
    // first residue (row-major in omega coordinate) whose lift has gcd d
    std::optional<residue_ring::res> rho;
    const quad_ideal& m = ring_.modulus();
    for (mpz_class y = 0; !rho && y < m.c; ++y)
        for (mpz_class x = 0; x < m.a; ++x) {
            residue_ring::res r{x, y};
            if (qi_add(F_, qi_principal(F_, canonical_lift(r)), fN_) == d) {
                rho = r;
                break;
            }
        }
    logic_check(rho.has_value(), "encode: no residue with the orbit gcd");
    // target class in C_{N d^{-1}} for the coprime cofactor
    std::vector<mpz_class> cls = G.dlog(qi_div(F_, M_->rep(class_index),
                                               qi_add(F_, M_->rep(class_index), fN_)));
    quad_ideal rd = qi_div(F_, qi_principal(F_, canonical_lift(*rho)), d);
    std::vector<mpz_class> shift = G.dlog(rd);
    std::vector<mpz_class> want(cls.size());
    for (size_t t = 0; t < cls.size(); ++t) {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), mpz_class(cls[t] - shift[t]).get_mpz_t(),
                   G.shape().divisors[t].get_mpz_t());
        want[t] = r;
    }
    for (long n = 1; n < 100000; ++n)
        for (const auto& B : ideals_of_norm(F_, n)) {
            if (!qi_coprime(F_, B, fN_)) continue;
            if (G.dlog(B) == want) return {*rho, CN_->dlog(B)};
        }
    throw std::logic_error("encode: no coprime ideal hit the target class");
}

long adelic_level::decode(const adelic_pair& p) const {
    quad_ideal as = CN_->class_rep(p.s);
    return M_->classify(qi_mul(F_, qi_principal(F_, canonical_lift(p.rho)), as));
}

adelic_pair adelic_level::act_unit(const residue_ring::res& u, const adelic_pair& p) const {
    arg_check(ring_.is_unit(u), "act_unit: not a unit residue");
    adelic_pair q;
    q.rho = ring_.mul(p.rho, u);
    std::vector<mpz_class> du = CN_->dlog(qi_principal(F_, ring_.lift(u)));
    q.s.resize(p.s.size());
    for (size_t t = 0; t < p.s.size(); ++t) {
        mpz_class r;
        mpz_fdiv_r(r.get_mpz_t(), mpz_class(p.s[t] - du[t]).get_mpz_t(),
                   CN_->shape().divisors[t].get_mpz_t());
        q.s[t] = r;
    }
    return q;
}

std::optional<residue_ring::res> adelic_level::sim_n_witness(const adelic_pair& x,
                                                             const adelic_pair& y) const {
    torsion_galois Tx = torsion_field(x.rho), Ty = torsion_field(y.rho);
    if (Tx.dbar != Ty.dbar) return std::nullopt;  // components never meet
    const ray_class_group& G = *Tx.group;
    std::vector<mpz_class> vs = G.dlog(CN_->class_rep(x.s));
    std::vector<mpz_class> vt = G.dlog(CN_->class_rep(y.s));
    for (const auto& u : units_) {
        if (ring_.mul(x.rho, u) != y.rho) continue;
        std::vector<mpz_class> du = G.dlog(qi_principal(F_, ring_.lift(u)));
        bool ok = true;
        for (size_t t = 0; t < vs.size() && ok; ++t) {
            mpz_class r;
            mpz_fdiv_r(r.get_mpz_t(), mpz_class(du[t] + vt[t] - vs[t]).get_mpz_t(),
                       G.shape().divisors[t].get_mpz_t());
            ok = r == 0;
        }
        if (ok) return u;
    }
    return std::nullopt;
}

bool adelic_level::sim_n(const adelic_pair& x, const adelic_pair& y) const {
    return sim_n_witness(x, y).has_value();
}

partition adelic_level::sim_n_congruence() const {
    long n = M_->size();
    std::vector<adelic_pair> enc(n);
    for (long i = 0; i < n; ++i) enc[i] = encode(i);
    partition p(n, -1);
    long blocks = 0;
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < i; ++j)
            if (p[j] >= 0 && sim_n(enc[i], enc[j])) {
                p[i] = p[j];
                break;
            }
        if (p[i] < 0) p[i] = blocks++;
    }
    return p;
}

}  // namespace drwitt
