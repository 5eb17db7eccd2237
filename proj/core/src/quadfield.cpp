#include "drwitt/quadfield.hpp"

#include <algorithm>
#include <numeric>

namespace drwitt {

namespace {

bool squarefree(long d) {
    for (long p = 2; p * p <= d; ++p)
        if (d % (p * p) == 0) return false;
    return true;
}

mpz_class zgcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

mpz_class zlcm(const mpz_class& a, const mpz_class& b) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

mpz_class zmod(const mpz_class& a, const mpz_class& m) {  // into [0, m)
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

}  // namespace

quad_field quad_field::create(long d) {
    arg_check(d > 0, "quad_field: need d > 0 (field Q(sqrt(-d)))");
    arg_check(squarefree(d), "quad_field: d must be squarefree");
    quad_field F;
    F.d = d;
    if (d % 4 == 3) {  // -d = 1 mod 4
        F.disc = -d;
        F.omega_tr = 1;
        F.omega_nm = (1 + d) / 4;
    } else {
        F.disc = -4 * d;
        F.omega_tr = 0;
        F.omega_nm = d;
    }
    return F;
}

long quad_field::unit_order() const { return d == 1 ? 4 : (d == 3 ? 6 : 2); }

quad_elem qe_add(const quad_elem& a, const quad_elem& b) { return {a.x + b.x, a.y + b.y}; }
quad_elem qe_sub(const quad_elem& a, const quad_elem& b) { return {a.x - b.x, a.y - b.y}; }
quad_elem qe_neg(const quad_elem& a) { return {-a.x, -a.y}; }

quad_elem qe_mul(const quad_field& F, const quad_elem& a, const quad_elem& b) {
    // omega^2 = tr*omega - nm
    mpq_class yy = a.y * b.y;
    return {a.x * b.x - F.omega_nm * yy, a.x * b.y + a.y * b.x + F.omega_tr * yy};
}

quad_elem qe_conj(const quad_field& F, const quad_elem& a) {
    return {a.x + F.omega_tr * a.y, -a.y};
}

mpq_class qe_norm(const quad_field& F, const quad_elem& a) {
    return a.x * a.x + F.omega_tr * a.x * a.y + F.omega_nm * a.y * a.y;
}

mpq_class qe_trace(const quad_field& F, const quad_elem& a) {
    return 2 * a.x + F.omega_tr * a.y;
}

quad_elem qe_inv(const quad_field& F, const quad_elem& a) {
    arg_check(!a.is_zero(), "qe_inv: zero element");
    mpq_class n = qe_norm(F, a);
    quad_elem c = qe_conj(F, a);
    return {c.x / n, c.y / n};
}

quad_elem qe_div(const quad_field& F, const quad_elem& a, const quad_elem& b) {
    return qe_mul(F, a, qe_inv(F, b));
}

bool qe_is_integral(const quad_elem& a) {
    return a.x.get_den() == 1 && a.y.get_den() == 1;
}

quad_elem qe_unit_gen(const quad_field& F) {
    if (F.d == 1 || F.d == 3) return {0, 1};
    return {-1, 0};
}

quad_elem qe_pow(const quad_field& F, const quad_elem& a, unsigned long n) {
    quad_elem r{1, 0}, b = a;
    while (n) {
        if (n & 1) r = qe_mul(F, r, b);
        b = qe_mul(F, b, b);
        n >>= 1;
    }
    return r;
}

namespace {

// HNF of the Z-module spanned by rows (u_i, v_i) meaning u_i + v_i*omega.
// Returns (a, b, c) with module = Z a + Z (b + c omega); (0,0,0) if rank 0.
struct hnf2 {
    mpz_class a, b, c;
};

hnf2 hnf_rows(std::vector<std::pair<mpz_class, mpz_class>> rows) {
    mpz_class B = 0, C = 0;
    // gcd-combine the omega components into one row (B, C)
    for (auto& [u, v] : rows) {
        if (v == 0) continue;
        mpz_class g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), C.get_mpz_t(),
                   v.get_mpz_t());
        B = s * B + t * u;
        C = g;
    }
    mpz_class a = 0;
    for (auto& [u, v] : rows) {
        mpz_class uu = u;
        if (v != 0) {
            logic_check(C != 0 && v % C == 0, "hnf_rows: bad clearing");
            uu -= (v / C) * B;
        }
        a = zgcd(a, uu);
    }
    if (a == 0 && C == 0) return {0, 0, 0};
    logic_check(a != 0, "hnf_rows: rank-1 module is not an ideal");
    if (a < 0) a = -a;
    if (C < 0) { C = -C; B = -B; }
    B = zmod(B, a);
    return {a, B, C};
}

quad_ideal make_ideal(const quad_field& F, hnf2 h, mpz_class denom) {
    quad_ideal I;
    I.disc = F.disc;
    if (h.a == 0) {  // zero ideal
        I.a = I.b = I.c = 0;
        I.denom = 1;
        return I;
    }
    logic_check(h.c > 0, "make_ideal: module of rank < 2");
    // ideal invariants: c | a, c | b, and a*c | N(b + c*omega)
    logic_check(h.a % h.c == 0 && h.b % h.c == 0, "make_ideal: module not a fractional ideal");
    mpz_class nm = h.b * h.b + F.omega_tr * h.b * h.c + F.omega_nm * h.c * h.c;
    logic_check(nm % (h.a * h.c) == 0, "make_ideal: module not omega-stable");
    if (denom < 0) denom = -denom;
    logic_check(denom > 0, "make_ideal: zero denominator");
    mpz_class g = zgcd(zgcd(h.a, h.b), zgcd(h.c, denom));
    I.a = h.a / g;
    I.b = h.b / g;
    I.c = h.c / g;
    I.denom = denom / g;
    return I;
}

void check_field(const quad_field& F, const quad_ideal& A) {
    arg_check(A.disc == F.disc, "ideal belongs to a different field");
}

}  // namespace

quad_ideal qi_one(const quad_field& F) {
    return make_ideal(F, {1, 0, 1}, 1);
}

quad_ideal qi_from_z(const quad_field& F, const mpz_class& n) {
    if (n == 0) return make_ideal(F, {0, 0, 0}, 1);
    mpz_class m = abs(n);
    return make_ideal(F, {m, 0, m}, 1);
}

quad_ideal qi_principal(const quad_field& F, const quad_elem& g) {
    if (g.is_zero()) return make_ideal(F, {0, 0, 0}, 1);
    mpz_class D = zlcm(g.x.get_den(), g.y.get_den());
    mpz_class U = mpz_class(g.x * D), V = mpz_class(g.y * D);
    // rows: g*1 and g*omega = -V*nm + (U + V*tr) omega
    std::vector<std::pair<mpz_class, mpz_class>> rows = {
        {U, V}, {-V * F.omega_nm, U + V * F.omega_tr}};
    return make_ideal(F, hnf_rows(std::move(rows)), D);
}

quad_ideal qi_mul(const quad_field& F, const quad_ideal& A, const quad_ideal& B) {
    check_field(F, A);
    check_field(F, B);
    if (A.is_zero() || B.is_zero()) return qi_from_z(F, 0);
    // products of the basis elements, coordinates over Z
    auto prod = [&](const mpz_class& u1, const mpz_class& v1, const mpz_class& u2,
                    const mpz_class& v2) -> std::pair<mpz_class, mpz_class> {
        mpz_class yy = v1 * v2;
        return {u1 * u2 - F.omega_nm * yy, u1 * v2 + v1 * u2 + F.omega_tr * yy};
    };
    std::vector<std::pair<mpz_class, mpz_class>> rows = {
        prod(A.a, 0, B.a, 0), prod(A.a, 0, B.b, B.c), prod(A.b, A.c, B.a, 0),
        prod(A.b, A.c, B.b, B.c)};
    return make_ideal(F, hnf_rows(std::move(rows)), A.denom * B.denom);
}

quad_ideal qi_add(const quad_field& F, const quad_ideal& A, const quad_ideal& B) {
    check_field(F, A);
    check_field(F, B);
    if (A.is_zero()) return B;
    if (B.is_zero()) return A;
    mpz_class L = zlcm(A.denom, B.denom);
    mpz_class fa = L / A.denom, fb = L / B.denom;
    std::vector<std::pair<mpz_class, mpz_class>> rows = {{A.a * fa, 0},
                                                         {A.b * fa, A.c * fa},
                                                         {B.a * fb, 0},
                                                         {B.b * fb, B.c * fb}};
    return make_ideal(F, hnf_rows(std::move(rows)), L);
}

quad_ideal qi_conj(const quad_field& F, const quad_ideal& A) {
    check_field(F, A);
    if (A.is_zero()) return A;
    // conj(b + c omega) = (b + c tr) - c omega
    std::vector<std::pair<mpz_class, mpz_class>> rows = {
        {A.a, 0}, {A.b + A.c * F.omega_tr, -A.c}};
    return make_ideal(F, hnf_rows(std::move(rows)), A.denom);
}

namespace {

quad_ideal qi_scale(const quad_field& F, const quad_ideal& A, const mpq_class& r) {
    arg_check(r != 0, "qi_scale: zero scalar");
    if (A.is_zero()) return A;
    mpz_class num = abs(r.get_num()), den = r.get_den();
    std::vector<std::pair<mpz_class, mpz_class>> rows = {{A.a * num, 0},
                                                         {A.b * num, A.c * num}};
    return make_ideal(F, hnf_rows(std::move(rows)), A.denom * den);
}

}  // namespace

quad_ideal qi_inv(const quad_field& F, const quad_ideal& A) {
    check_field(F, A);
    arg_check(!A.is_zero(), "qi_inv: zero ideal");
    // A * conj(A) = (N(A)) so 1/A = conj(A)/N(A)
    mpq_class n = qi_norm(F, A);
    return qi_scale(F, qi_conj(F, A), 1 / n);
}

quad_ideal qi_div(const quad_field& F, const quad_ideal& A, const quad_ideal& B) {
    return qi_mul(F, A, qi_inv(F, B));
}

quad_ideal qi_pow(const quad_field& F, const quad_ideal& A, unsigned long n) {
    check_field(F, A);
    quad_ideal r = qi_one(F), b = A;
    while (n) {
        if (n & 1) r = qi_mul(F, r, b);
        b = qi_mul(F, b, b);
        n >>= 1;
    }
    return r;
}

mpq_class qi_norm(const quad_field& F, const quad_ideal& A) {
    check_field(F, A);
    if (A.is_zero()) return 0;
    return mpq_class(A.a * A.c) / (A.denom * A.denom);
}

bool qi_is_integral(const quad_ideal& A) {
    if (A.is_zero()) return true;
    if (A.denom == 1) return true;
    return false;  // canonical form has denom 1 exactly when integral
}

bool qi_contains(const quad_field& F, const quad_ideal& A, const quad_elem& t) {
    check_field(F, A);
    if (A.is_zero()) return t.is_zero();
    // denom * t must lie in Z a + Z (b + c omega)
    mpq_class u = t.x * A.denom, v = t.y * A.denom;
    if (u.get_den() != 1 || v.get_den() != 1) return false;
    mpz_class U(u), V(v);
    if (V % A.c != 0) return false;
    mpz_class y = V / A.c;
    mpz_class rest = U - y * A.b;
    return rest % A.a == 0;
}

bool qi_divides(const quad_field& F, const quad_ideal& A, const quad_ideal& B) {
    // A | B  <=>  B subset A
    if (A.is_zero()) return B.is_zero();
    if (B.is_zero()) return true;
    auto [e1, e2] = qi_basis(B);
    return qi_contains(F, A, e1) && qi_contains(F, A, e2);
}

bool qi_coprime(const quad_field& F, const quad_ideal& A, const quad_ideal& B) {
    return qi_add(F, A, B) == qi_one(F);
}

int qi_cmp(const quad_ideal& A, const quad_ideal& B) {
    mpq_class na = mpq_class(A.a * A.c) / (A.denom * A.denom);
    mpq_class nb = mpq_class(B.a * B.c) / (B.denom * B.denom);
    if (na != nb) return na < nb ? -1 : 1;
    if (A.a != B.a) return A.a < B.a ? -1 : 1;
    if (A.b != B.b) return A.b < B.b ? -1 : 1;
    if (A.c != B.c) return A.c < B.c ? -1 : 1;
    if (A.denom != B.denom) return A.denom < B.denom ? -1 : 1;
    return 0;
}

std::pair<quad_elem, quad_elem> qi_basis(const quad_ideal& A) {
    mpq_class d(A.denom);
    return {quad_elem{mpq_class(A.a) / d, 0},
            quad_elem{mpq_class(A.b) / d, mpq_class(A.c) / d}};
}

std::vector<quad_ideal> primes_above(const quad_field& F, long p) {
    arg_check(p >= 2, "primes_above: need a prime");
    mpz_class D(F.disc);
    int kr = mpz_kronecker_ui(D.get_mpz_t(), (unsigned long)p);
    if (kr == -1) {  // inert
        return {qi_from_z(F, p)};
    }
    // b with N(b + omega) = b^2 + tr b + nm = 0 mod p
    long r = -1;
    for (long x = 0; x < p; ++x) {
        long val = ((x * x + F.omega_tr * x + F.omega_nm) % p + p) % p;
        if (val == 0) { r = x; break; }
    }
    logic_check(r >= 0, "primes_above: no root despite split/ramified symbol");
    quad_ideal P = make_ideal(F, {mpz_class(p), mpz_class(r), 1}, 1);
    if (kr == 0) return {P};  // ramified
    quad_ideal Q = qi_conj(F, P);
    if (qi_cmp(P, Q) > 0) std::swap(P, Q);
    return {P, Q};
}

long qi_valuation(const quad_field& F, const quad_ideal& P, const quad_ideal& A) {
    long v = 0;
    quad_ideal cur = A;
    while (qi_divides(F, P, cur)) {
        cur = qi_div(F, cur, P);
        ++v;
    }
    return v;
}

std::vector<std::pair<quad_ideal, long>> factor_ideal(const quad_field& F,
                                                      const quad_ideal& A,
                                                      long bound) {
    check_field(F, A);
    arg_check(!A.is_zero() && qi_is_integral(A), "factor_ideal: nonzero integral ideal required");
    mpz_class n = A.a * A.c;
    std::vector<std::pair<quad_ideal, long>> out;
    std::vector<long> ps;
    for (long p = 2; mpz_class(p) * p <= n && p <= bound; p == 2 ? p = 3 : p += 2) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) {
        if (n > bound) throw factor_limit_error("factor_ideal: norm cofactor exceeds trial bound");
        ps.push_back(n.get_si());
    }
    for (long p : ps)
        for (const quad_ideal& P : primes_above(F, p)) {
            long v = qi_valuation(F, P, A);
            if (v > 0) out.emplace_back(P, v);
        }
    return out;
}

std::optional<quad_elem> is_principal(const quad_field& F, const quad_ideal& A) {
    check_field(F, A);
    arg_check(!A.is_zero(), "is_principal: zero ideal");
    // The lattice part [a, b + c omega] is principal iff A is; generator scales by 1/denom.
    // Search solutions of N(u + v omega) = a*c:  (2u + tr v)^2 + |disc| v^2 = 4ac.
    mpz_class N4 = 4 * A.a * A.c;
    mpz_class Dm(-F.disc);
    mpz_class vmax;
    mpz_sqrt(vmax.get_mpz_t(), mpz_class(N4 / Dm).get_mpz_t());
    for (mpz_class vv = 0; vv <= vmax; ++vv) {
        if (vv % A.c != 0) continue;  // v must be a multiple of c for membership
        mpz_class rem = N4 - Dm * vv * vv;
        if (rem < 0) break;
        if (mpz_perfect_square_p(rem.get_mpz_t()) == 0) continue;
        mpz_class s;
        mpz_sqrt(s.get_mpz_t(), rem.get_mpz_t());
        for (int sv : {1, -1}) {
            for (int svv : {1, -1}) {
                if (vv == 0 && svv < 0) continue;
                mpz_class v = svv * vv;
                mpz_class num = sv * s - F.omega_tr * v;
                if (num % 2 != 0) continue;
                mpz_class u = num / 2;
                if (vv == 0 && sv < 0) continue;
                // membership of u + v omega in the lattice
                mpz_class y = v / A.c;
                if ((u - y * A.b) % A.a != 0) continue;
                quad_elem g{mpq_class(u) / mpq_class(A.denom),
                            mpq_class(v) / mpq_class(A.denom)};
                if (qi_principal(F, g) == A) return g;
            }
        }
    }
    return std::nullopt;
}

std::vector<quad_ideal> ideals_of_norm(const quad_field& F, const mpz_class& n) {
    arg_check(n > 0, "ideals_of_norm: n > 0");
    std::vector<quad_ideal> out;
    mpz_class cmax;
    mpz_sqrt(cmax.get_mpz_t(), n.get_mpz_t());
    for (mpz_class c = cmax; c >= 1; --c) {  // a = n/c ascending
        if (n % (c * c) != 0) continue;
        mpz_class a = n / c;
        for (mpz_class b = 0; b < a; b += c) {
            mpz_class nm = b * b + F.omega_tr * b * c + F.omega_nm * c * c;
            if (nm % (a * c) == 0) out.push_back(make_ideal(F, {a, b, c}, 1));
        }
    }
    return out;
}

mpz_class group_shape::order() const {
    mpz_class o = 1;
    for (const auto& d : divisors) o *= d;
    return o;
}

// ---------------------------------------------------------------------------
// reduced binary quadratic forms

qform form_reduce(qform f) {
    for (;;) {
        // normalize: b in (-a, a]
        mpz_class twoa = 2 * f.a;
        mpz_class r = zmod(f.b + f.a, twoa) - f.a;  // in (-a, a]
        if (r != f.b) {
            mpz_class s = (r - f.b) / twoa;
            f.c += s * (f.b + f.a * s);
            f.b = r;
        }
        if (f.a > f.c) {
            f = {f.c, -f.b, f.a};
            continue;
        }
        if (f.a == f.c && f.b < 0) f.b = -f.b;
        if (f.b == -f.a) f.b = f.a;
        return f;
    }
}

namespace {

// reduce while tracking the substitution: Q_red(x, y) = Q((x,y) * M^T)-style;
// returns column vector v with Q(v) = reduced leading coefficient.
qform form_reduce_t(qform f, mpz_class& v0, mpz_class& v1) {
    // M maps coordinates of the reduced form to coordinates of f
    mpz_class m00 = 1, m01 = 0, m10 = 0, m11 = 1;
    for (;;) {
        mpz_class twoa = 2 * f.a;
        mpz_class r = zmod(f.b + f.a, twoa) - f.a;
        if (r != f.b) {
            mpz_class s = (r - f.b) / twoa;
            // (x, y) -> (x + s y, y)
            f.c += s * (f.b + f.a * s);
            f.b = r;
            m01 += s * m00;
            m11 += s * m10;
        }
        if (f.a > f.c) {
            // (x, y) -> (-y, x)
            f = {f.c, -f.b, f.a};
            mpz_class t0 = m01, t1 = m11;
            m01 = m00; m11 = m10;
            m00 = -t0; m10 = -t1;
            continue;
        }
        if (f.a == f.c && f.b < 0) {
            f.b = -f.b;
            m01 = -m01; m11 = -m11;
        }
        if (f.b == -f.a) {
            f.b = f.a;
            m01 += m00; m11 += m10;
        }
        v0 = m00;
        v1 = m10;
        return f;
    }
}

}  // namespace

std::vector<qform> reduced_forms(long disc) {
    arg_check(disc < 0 && (disc % 4 == 0 || ((disc % 4) + 4) % 4 == 1),
              "reduced_forms: need negative discriminant = 0,1 mod 4");
    std::vector<qform> out;
    mpz_class Dm(-disc);
    for (mpz_class b = (Dm % 2 == 0) ? 0 : 1; 3 * b * b <= Dm; b += 2) {
        mpz_class ac4 = b * b + Dm;
        logic_check(ac4 % 4 == 0, "reduced_forms: parity");
        mpz_class ac = ac4 / 4;
        for (mpz_class a = (b > 0 ? b : 1); a * a <= ac; ++a) {
            if (ac % a != 0) continue;
            mpz_class c = ac / a;
            logic_check(zgcd(zgcd(a, b), c) == 1,
                        "reduced_forms: imprimitive form at fundamental discriminant");
            out.push_back({a, b, c});
            if (b > 0 && b < a && a < c) out.push_back({a, -b, c});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

qform form_of_ideal(const quad_field& F, const quad_ideal& A) {
    check_field(F, A);
    arg_check(!A.is_zero(), "form_of_ideal: zero ideal");
    // primitive part [a/c, b/c + omega]
    mpz_class a = A.a / A.c, b = A.b / A.c;
    mpz_class nm = b * b + F.omega_tr * b + F.omega_nm;
    logic_check(nm % a == 0, "form_of_ideal: not omega-stable");
    return {a, 2 * b + F.omega_tr, nm / a};
}

quad_ideal ideal_of_form(const quad_field& F, const qform& f) {
    logic_check(f.b * f.b - 4 * f.a * f.c == F.disc, "ideal_of_form: wrong discriminant");
    mpz_class b = zmod((f.b - F.omega_tr) / 2, f.a);
    return make_ideal(F, {f.a, b, 1}, 1);
}

long class_number(long disc) { return (long)reduced_forms(disc).size(); }

// ---------------------------------------------------------------------------
// residue ring O_K/f

residue_ring::residue_ring(const quad_field& F, const quad_ideal& f) : F_(F), f_(f) {
    check_field(F, f);
    arg_check(!f.is_zero() && qi_is_integral(f), "residue_ring: integral nonzero modulus");
    mpz_class s = f.a * f.c;
    arg_check(s.fits_slong_p(), "residue_ring: modulus too large");
    sz_ = s.get_si();
}

residue_ring::res residue_ring::reduce(const quad_elem& t) const {
    arg_check(qe_is_integral(t), "residue_ring: integral element required");
    mpz_class x(t.x), y(t.y);
    mpz_class y2 = zmod(y, f_.c);
    mpz_class k = (y - y2) / f_.c;
    mpz_class x2 = zmod(x - k * f_.b, f_.a);
    return {x2, y2};
}

residue_ring::res residue_ring::mul(const res& s, const res& t) const {
    quad_elem p = qe_mul(F_, lift(s), lift(t));
    return reduce(p);
}

bool residue_ring::is_unit(const res& r) const {
    return qi_add(F_, qi_principal(F_, lift(r)), f_) == qi_one(F_);
}

residue_ring::res residue_ring::inv(const res& r) const {
    // desk-scale brute inverse
    for (mpz_class x = 0; x < f_.a; ++x)
        for (mpz_class y = 0; y < f_.c; ++y) {
            res s{x, y};
            if (mul(r, s) == one()) return s;
        }
    throw std::invalid_argument("residue_ring::inv: not a unit");
}

residue_ring::res residue_ring::pow(const res& r, const mpz_class& n) const {
    logic_check(n >= 0, "residue_ring::pow: nonnegative exponent");
    res acc = one(), base = r;
    mpz_class m = n;
    while (m > 0) {
        if (mpz_odd_p(m.get_mpz_t())) acc = mul(acc, base);
        base = mul(base, base);
        m >>= 1;
    }
    return acc;
}

std::vector<residue_ring::res> residue_ring::all_units() const {
    std::vector<res> out;
    for (mpz_class x = 0; x < f_.a; ++x)
        for (mpz_class y = 0; y < f_.c; ++y) {
            res r{x, y};
            if (is_unit(r)) out.push_back(r);
        }
    return out;
}

// ---------------------------------------------------------------------------
// generic finite abelian presentation via Cayley-closure relations + SNF

namespace {

template <class T, class MulFn>
struct ab_presentation {
    std::vector<T> gens;                       // adopted generators
    std::vector<std::vector<mpz_class>> word;  // index-parallel to elements
    std::vector<T> elements;
    std::map<T, long> index;
    std::vector<std::vector<mpz_class>> relations;

    void build(const T& id, const std::vector<T>& candidates, MulFn mul, long target) {
        elements.push_back(id);
        index[id] = 0;
        word.push_back({});
        for (const T& g : candidates) {
            if ((long)elements.size() >= target) break;
            if (index.count(g)) continue;
            // adopt g as generator and close the span
            for (auto& w : word) w.push_back(0);
            for (auto& r : relations) r.push_back(0);
            long gi = (long)gens.size();
            gens.push_back(g);
            size_t head = 0;
            // BFS over multiplication by all adopted generators
            std::vector<T> frontier = elements;
            std::vector<std::vector<mpz_class>> fword = word;
            while (head < frontier.size()) {
                T cur = frontier[head];
                std::vector<mpz_class> cw = fword[head];
                ++head;
                for (long k = 0; k <= gi; ++k) {
                    T nxt = mul(cur, gens[k]);
                    std::vector<mpz_class> nw = cw;
                    nw[k] += 1;
                    auto it = index.find(nxt);
                    if (it == index.end()) {
                        index[nxt] = (long)elements.size();
                        elements.push_back(nxt);
                        word.push_back(nw);
                        frontier.push_back(nxt);
                        fword.push_back(nw);
                    } else {
                        // collision relation: nw - word(nxt) kills nothing new often
                        std::vector<mpz_class> rel = nw;
                        const auto& old = word[it->second];
                        bool nz = false;
                        for (size_t t = 0; t < rel.size(); ++t) {
                            rel[t] -= old[t];
                            if (rel[t] != 0) nz = true;
                        }
                        if (nz) relations.push_back(rel);
                    }
                }
            }
        }
        logic_check((long)elements.size() == target, "ab_presentation: generators do not span");
    }
};

struct snf_presentation {
    group_shape shape;
    zmat V;                        // old -> new transform
    std::vector<mpz_class> snf_d;  // all diagonal entries
    std::vector<long> kept;

    std::vector<mpz_class> to_new(const std::vector<mpz_class>& vold) const {
        std::vector<mpz_class> full(snf_d.size(), 0);
        for (long j = 0; j < (long)snf_d.size(); ++j) {
            mpz_class s = 0;
            for (long i = 0; i < (long)vold.size(); ++i) s += vold[i] * V.at(i, j);
            full[j] = snf_d[j] > 0 ? zmod(s, snf_d[j]) : s;
        }
        std::vector<mpz_class> out;
        for (long k : kept) out.push_back(full[k]);
        return out;
    }
};

snf_presentation snf_of_relations(long ngens, const std::vector<std::vector<mpz_class>>& rels,
                                  const mpz_class& order) {
    snf_presentation P;
    if (ngens == 0) {
        logic_check(order == 1, "snf_of_relations: trivial presentation of nontrivial group");
        return P;
    }
    zmat R((long)rels.size(), ngens);
    for (long i = 0; i < R.r; ++i)
        for (long j = 0; j < ngens; ++j) R.at(i, j) = rels[i][j];
    snf_result s = snf(R);
    P.V = s.V;
    P.snf_d.assign(ngens, 0);
    mpz_class prod = 1;
    for (long k = 0; k < ngens; ++k) {
        mpz_class dk = k < s.S.r ? s.S.at(k, k) : mpz_class(0);
        logic_check(dk != 0, "snf_of_relations: infinite quotient (incomplete relations)");
        P.snf_d[k] = dk;
        prod *= dk;
        if (dk > 1) P.kept.push_back(k);
    }
    logic_check(prod == order, "snf_of_relations: order mismatch");
    for (long k : P.kept) P.shape.divisors.push_back(P.snf_d[k]);
    return P;
}

// exponent rows of V^{-1} describe new generators in terms of old ones
std::vector<std::vector<mpz_class>> new_gen_exprs(const snf_presentation& P, long ngens) {
    std::vector<std::vector<mpz_class>> out;
    if (ngens == 0) return out;
    qmat Vq = qm_from_z(P.V);
    qmat W = qm_inverse(Vq);
    for (long k : P.kept) {
        std::vector<mpz_class> row(ngens);
        for (long i = 0; i < ngens; ++i) {
            const mpq_class& x = W.at(k, i);
            logic_check(x.get_den() == 1, "new_gen_exprs: non-integral inverse transform");
            row[i] = x.get_num();
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// (O/f)^x

unit_group_mod::unit_group_mod(const quad_field& F, const quad_ideal& f)
    : ring_(F, f) {
    auto units = ring_.all_units();
    auto mul = [&](const residue_ring::res& a, const residue_ring::res& b) {
        return ring_.mul(a, b);
    };
    ab_presentation<residue_ring::res, decltype(mul)> pres;
    pres.build(ring_.one(), units, mul, (long)units.size());
    long ng = (long)pres.gens.size();
    snf_presentation P = snf_of_relations(ng, pres.relations, mpz_class((long)units.size()));
    shape_ = P.shape;
    // dlog table over all units
    for (long i = 0; i < (long)pres.elements.size(); ++i)
        dlog_[pres.elements[i]] = P.to_new(pres.word[i]);
    // generator residues
    std::vector<mpz_class> ords(ng);
    for (long i = 0; i < ng; ++i) {
        residue_ring::res acc = pres.gens[i];
        mpz_class o = 1;
        while (acc != ring_.one()) {
            acc = ring_.mul(acc, pres.gens[i]);
            ++o;
        }
        ords[i] = o;
    }
    for (const auto& expr : new_gen_exprs(P, ng)) {
        residue_ring::res acc = ring_.one();
        for (long i = 0; i < ng; ++i) {
            mpz_class e = zmod(expr[i], ords[i]);
            acc = ring_.mul(acc, ring_.pow(pres.gens[i], e));
        }
        gens_.push_back(ring_.lift(acc));
    }
    // image of the global units
    quad_elem z = qe_unit_gen(F);
    residue_ring::res zr = ring_.reduce(z), acc = zr;
    long o = 1;
    while (acc != ring_.one()) {
        acc = ring_.mul(acc, zr);
        ++o;
    }
    unit_im_ = o;
}

std::vector<mpz_class> unit_group_mod::dlog(const residue_ring::res& r) const {
    auto it = dlog_.find(r);
    arg_check(it != dlog_.end(), "unit_group_mod::dlog: not a unit residue");
    return it->second;
}

std::vector<mpz_class> unit_group_mod::dlog(const quad_elem& t) const {
    return dlog(ring_.reduce(t));
}

// ---------------------------------------------------------------------------
// ray class group

namespace {

// realize an exponent vector over (unit-part gens | class-part gens) as a
// coprime integral ideal, normalizing class-part exponents into [0, n_j)
// with carries through h_j^{n_j} = (gamma_j)
quad_ideal realize_old(const quad_field& F, const unit_group_mod& U,
                       const std::vector<quad_ideal>& c1_gens,
                       const std::vector<mpz_class>& c1_orders,
                       const std::vector<std::vector<mpz_class>>& c1_gamma_dlog,
                       std::vector<mpz_class> vold) {
    long m = (long)U.shape().divisors.size();
    long r = (long)c1_orders.size();
    for (long j = 0; j < r; ++j) {
        mpz_class b = zmod(vold[m + j], c1_orders[j]);
        mpz_class carry = (vold[m + j] - b) / c1_orders[j];
        vold[m + j] = b;
        if (carry != 0)
            for (long i = 0; i < m; ++i) vold[i] += carry * c1_gamma_dlog[j][i];
    }
    quad_ideal A = qi_one(F);
    const auto& ring = U.ring();
    for (long i = 0; i < m; ++i) {
        mpz_class a = zmod(vold[i], U.shape().divisors[i]);
        if (a == 0) continue;
        auto pw = ring.pow(ring.reduce(U.generators()[i]), a);
        A = qi_mul(F, A, qi_principal(F, ring.lift(pw)));
    }
    for (long j = 0; j < r; ++j)
        if (vold[m + j] != 0) A = qi_mul(F, A, qi_pow(F, c1_gens[j], vold[m + j].get_ui()));
    return A;
}

}  // namespace

ray_class_group::ray_class_group(const quad_field& F, const quad_ideal& f)
    : F_(F), f_(f) {
    check_field(F, f);
    arg_check(!f.is_zero() && qi_is_integral(f), "ray_class_group: integral nonzero modulus");
    units_ = std::make_unique<unit_group_mod>(F, f);

    // class group side via reduced forms
    auto forms = reduced_forms(F.disc);
    long h = (long)forms.size();
    auto fmul = [&](const qform& x, const qform& y) {
        quad_ideal prod = qi_mul(F, ideal_of_form(F, x), ideal_of_form(F, y));
        return form_reduce(form_of_ideal(F, prod));
    };
    qform form_id = form_reduce(form_of_ideal(F, qi_one(F)));
    ab_presentation<qform, decltype(fmul)> cpres;
    {
        std::vector<qform> cands(forms.begin(), forms.end());
        cpres.build(form_id, cands, fmul, h);
    }
    long ngc = (long)cpres.gens.size();
    snf_presentation CP = snf_of_relations(ngc, cpres.relations, mpz_class(h));
    for (long i = 0; i < (long)cpres.elements.size(); ++i)
        c1_dlog_[cpres.elements[i]] = CP.to_new(cpres.word[i]);
    c1_orders_ = CP.shape.divisors;
    long r = (long)c1_orders_.size();

    // coprime ideal lifts of the class-group basis
    for (long j = 0; j < r; ++j) {
        std::vector<mpz_class> want(r, 0);
        want[j] = 1;
        bool found = false;
        for (mpz_class n = 2; !found; ++n) {
            for (const quad_ideal& I : ideals_of_norm(F, n)) {
                if (!qi_coprime(F, I, f_)) continue;
                if (c1_dlog_.at(form_reduce(form_of_ideal(F, I))) == want) {
                    c1_gens_.push_back(I);
                    found = true;
                    break;
                }
            }
            logic_check(n < 10000, "ray_class_group: no coprime class representative found");
        }
        auto gamma = is_principal(F, qi_pow(F, c1_gens_[j], c1_orders_[j].get_ui()));
        logic_check(gamma.has_value(), "ray_class_group: basis power not principal");
        c1_gamma_.push_back(*gamma);
        c1_gamma_dlog_.push_back(units_->dlog(*gamma));
    }

    // relation matrix over (unit-part gens | class-part gens)
    long m = (long)units_->shape().divisors.size();
    std::vector<std::vector<mpz_class>> rels;
    for (long i = 0; i < m; ++i) {
        std::vector<mpz_class> row(m + r, 0);
        row[i] = units_->shape().divisors[i];
        rels.push_back(row);
    }
    {  // image of the global unit generator is trivial in C_f
        std::vector<mpz_class> row(m + r, 0);
        auto zd = units_->dlog(qe_unit_gen(F));
        for (long i = 0; i < m; ++i) row[i] = zd[i];
        rels.push_back(row);
    }
    for (long j = 0; j < r; ++j) {
        std::vector<mpz_class> row(m + r, 0);
        for (long i = 0; i < m; ++i) row[i] = -c1_gamma_dlog_[j][i];
        row[m + j] = c1_orders_[j];
        rels.push_back(row);
    }
    formula_order_ = mpz_class(h) * units_->shape().order() / units_->global_unit_image_order();
    snf_presentation P = snf_of_relations(m + r, rels, formula_order_);
    V_ = P.V;
    snf_div_ = P.snf_d;
    kept_ = P.kept;
    shape_ = P.shape;
    for (const auto& expr : new_gen_exprs(P, m + r))
        gens_.push_back(realize_old(F_, *units_, c1_gens_, c1_orders_, c1_gamma_dlog_, expr));
}

std::vector<mpz_class> ray_class_group::dlog(const quad_ideal& A) const {
    check_field(F_, A);
    arg_check(!A.is_zero() && qi_is_integral(A), "ray dlog: nonzero integral ideal required");
    arg_check(qi_coprime(F_, A, f_), "ray dlog: ideal not coprime to the modulus");
    long m = (long)units_->shape().divisors.size();
    long r = (long)c1_orders_.size();
    std::vector<mpz_class> c = c1_dlog_.at(form_reduce(form_of_ideal(F_, A)));
    quad_ideal B = A;
    std::vector<mpz_class> k(r, 0);
    for (long j = 0; j < r; ++j) {
        k[j] = zmod(c1_orders_[j] - c[j], c1_orders_[j]);
        if (k[j] != 0) B = qi_mul(F_, B, qi_pow(F_, c1_gens_[j], k[j].get_ui()));
    }
    // B is class-trivial: extract its generator by form reduction with transform
    mpz_class cont = B.c, v0, v1;
    mpz_class a = B.a / B.c, b = B.b / B.c;
    qform red = form_reduce_t(form_of_ideal(F_, B), v0, v1);
    logic_check(red.a == 1, "ray dlog: class-trivial ideal has nonprincipal form");
    // generator of the primitive part: v0*a + v1*(b + omega)
    quad_elem gamma{mpq_class(cont * (v0 * a + v1 * b)) / B.denom,
                    mpq_class(cont * v1) / B.denom};
    logic_check(qi_principal(F_, gamma) == B, "ray dlog: generator reconstruction failed");
    std::vector<mpz_class> vold(m + r, 0);
    auto u = units_->dlog(gamma);
    for (long i = 0; i < m; ++i) vold[i] = u[i];
    for (long j = 0; j < r; ++j) vold[m + j] = -k[j];
    return old_to_new(vold);
}

std::vector<mpz_class> ray_class_group::old_to_new(std::vector<mpz_class> vold) const {
    std::vector<mpz_class> full(snf_div_.size(), 0);
    for (long j = 0; j < (long)snf_div_.size(); ++j) {
        mpz_class s = 0;
        for (long i = 0; i < (long)vold.size(); ++i) s += vold[i] * V_.at(i, j);
        full[j] = zmod(s, snf_div_[j]);
    }
    std::vector<mpz_class> out;
    for (long kk : kept_) out.push_back(full[kk]);
    return out;
}

bool ray_class_group::same_class(const quad_ideal& A, const quad_ideal& B) const {
    return dlog(A) == dlog(B);
}

bool ray_class_group::is_ray_trivial(const quad_ideal& A) const {
    for (const auto& v : dlog(A))
        if (v != 0) return false;
    return true;
}

quad_ideal ray_class_group::class_rep(const std::vector<mpz_class>& v) const {
    arg_check(v.size() == shape_.divisors.size(), "class_rep: bad vector length");
    long n = (long)snf_div_.size();
    if (n == 0) return qi_one(F_);
    std::vector<mpz_class> full(n, 0);
    for (size_t t = 0; t < kept_.size(); ++t) full[kept_[t]] = v[t];
    // map through V^{-1} back to old generators
    qmat W = qm_inverse(qm_from_z(V_));
    std::vector<mpz_class> vold((size_t)n, 0);
    for (long i = 0; i < n; ++i) {
        mpq_class s = 0;
        for (long kk = 0; kk < n; ++kk) s += mpq_class(full[kk]) * W.at(kk, i);
        logic_check(s.get_den() == 1, "class_rep: non-integral transform");
        vold[i] = s.get_num();
    }
    quad_ideal A = realize_old(F_, *units_, c1_gens_, c1_orders_, c1_gamma_dlog_, vold);
    logic_check(dlog(A) == v, "class_rep: representative has wrong dlog");
    return A;
}

mpz_class ray_class_group::order_by_formula() const { return formula_order_; }

}  // namespace drwitt
