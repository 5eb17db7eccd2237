// Imaginary quadratic fields K = Q(sqrt(-d)): exact element and fractional
// ideal arithmetic (HNF), factorization, principality tests, class groups via
// reduced binary quadratic forms, residue unit groups and ray class groups.
#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "drwitt/intmat.hpp"

namespace drwitt {

// O_K = Z + Z*omega, omega = (1+sqrt(-d))/2 if d = 3 mod 4, else sqrt(-d).
struct quad_field {
    long d = 1;         // squarefree
    long disc = -4;     // field discriminant
    long omega_tr = 0;  // Tr(omega)
    long omega_nm = 1;  // N(omega)

    static quad_field create(long d);
    long unit_order() const;  // |O_K^x| = 4 (d=1), 6 (d=3), else 2
};

// x + y*omega with exact rational coordinates
struct quad_elem {
    mpq_class x = 0, y = 0;

    quad_elem() = default;
    quad_elem(mpq_class x_, mpq_class y_) : x(std::move(x_)), y(std::move(y_)) {}
    bool operator==(const quad_elem&) const = default;
    bool is_zero() const { return x == 0 && y == 0; }
};

quad_elem qe_add(const quad_elem& a, const quad_elem& b);
quad_elem qe_sub(const quad_elem& a, const quad_elem& b);
quad_elem qe_neg(const quad_elem& a);
quad_elem qe_mul(const quad_field& F, const quad_elem& a, const quad_elem& b);
quad_elem qe_conj(const quad_field& F, const quad_elem& a);
mpq_class qe_norm(const quad_field& F, const quad_elem& a);
mpq_class qe_trace(const quad_field& F, const quad_elem& a);
quad_elem qe_inv(const quad_field& F, const quad_elem& a);
quad_elem qe_div(const quad_field& F, const quad_elem& a, const quad_elem& b);
bool qe_is_integral(const quad_elem& a);
// the cyclic generator of O_K^x: omega for d in {1,3}, else -1
quad_elem qe_unit_gen(const quad_field& F);
quad_elem qe_pow(const quad_field& F, const quad_elem& a, unsigned long n);

// Fractional ideal (Z a + Z (b + c omega)) / denom with c | a, c | b,
// 0 <= b < a, a,c > 0, gcd(denom, content-normalized) minimal; a*c | N(b+c*omega).
// The zero ideal is represented by a = b = c = 0, denom = 1.
struct quad_ideal {
    long disc = -4;  // field tag, checked on mixed operations
    mpz_class a = 0, b = 0, c = 0, denom = 1;

    bool operator==(const quad_ideal&) const = default;
    bool is_zero() const { return a == 0; }
};

quad_ideal qi_one(const quad_field& F);
quad_ideal qi_from_z(const quad_field& F, const mpz_class& n);  // ideal (n)
quad_ideal qi_principal(const quad_field& F, const quad_elem& g);
quad_ideal qi_mul(const quad_field& F, const quad_ideal& A, const quad_ideal& B);
quad_ideal qi_add(const quad_field& F, const quad_ideal& A, const quad_ideal& B);  // gcd
quad_ideal qi_conj(const quad_field& F, const quad_ideal& A);
quad_ideal qi_inv(const quad_field& F, const quad_ideal& A);
quad_ideal qi_div(const quad_field& F, const quad_ideal& A, const quad_ideal& B);
quad_ideal qi_pow(const quad_field& F, const quad_ideal& A, unsigned long n);
mpq_class qi_norm(const quad_field& F, const quad_ideal& A);
bool qi_is_integral(const quad_ideal& A);
bool qi_contains(const quad_field& F, const quad_ideal& A, const quad_elem& t);
bool qi_divides(const quad_field& F, const quad_ideal& A, const quad_ideal& B);  // A | B
bool qi_coprime(const quad_field& F, const quad_ideal& A, const quad_ideal& B);
int qi_cmp(const quad_ideal& A, const quad_ideal& B);  // (norm, a, b, c, denom) lex
// ideal basis as elements: {a/denom, (b + c omega)/denom}
std::pair<quad_elem, quad_elem> qi_basis(const quad_ideal& A);

struct factor_limit_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// prime factorization of an integral ideal; trial division on the norm up to
// `bound`, throws factor_limit_error beyond it
std::vector<std::pair<quad_ideal, long>> factor_ideal(const quad_field& F,
                                                      const quad_ideal& A,
                                                      long bound = 1000000);
// prime ideals above the rational prime p
std::vector<quad_ideal> primes_above(const quad_field& F, long p);
long qi_valuation(const quad_field& F, const quad_ideal& P, const quad_ideal& A);

// generator if A is principal (norm-form enumeration; exact)
std::optional<quad_elem> is_principal(const quad_field& F, const quad_ideal& A);

// all integral ideals of norm n, ordered by (a,b,c) lex ascending
std::vector<quad_ideal> ideals_of_norm(const quad_field& F, const mpz_class& n);

// elementary divisor data: divisors[i] | divisors[i+1], all > 1
struct group_shape {
    std::vector<mpz_class> divisors;
    mpz_class order() const;
};

// binary quadratic form of discriminant disc(K), positive definite
struct qform {
    mpz_class a, b, c;
    bool operator==(const qform&) const = default;
    bool operator<(const qform& o) const {
        if (a != o.a) return a < o.a;
        if (b != o.b) return b < o.b;
        return c < o.c;
    }
};
qform form_reduce(qform f);
std::vector<qform> reduced_forms(long disc);              // all, sorted
qform form_of_ideal(const quad_field& F, const quad_ideal& A);
quad_ideal ideal_of_form(const quad_field& F, const qform& f);

// residue ring O_K / f for integral f; canonical coset reps x + y*omega,
// 0 <= x < a, 0 <= y < c, where f = [a, b + c omega]
class residue_ring {
  public:
    residue_ring(const quad_field& F, const quad_ideal& f);

    using res = std::pair<mpz_class, mpz_class>;  // (x, y)
    long size() const { return sz_; }
    res reduce(const quad_elem& t) const;  // t integral
    quad_elem lift(const res& r) const { return {mpq_class(r.first), mpq_class(r.second)}; }
    res mul(const res& s, const res& t) const;
    res one() const { return {1 % f_.a, 0}; }
    bool is_unit(const res& r) const;
    res inv(const res& r) const;  // throws on non-unit
    res pow(const res& r, const mpz_class& n) const;
    const quad_ideal& modulus() const { return f_; }
    const quad_field& field() const { return F_; }
    std::vector<res> all_units() const;

  private:
    quad_field F_;
    quad_ideal f_;
    long sz_;
};

// (O_K/f)^x with elementary-divisor presentation and exact dlog
class unit_group_mod {
  public:
    unit_group_mod(const quad_field& F, const quad_ideal& f);

    const group_shape& shape() const { return shape_; }
    const std::vector<quad_elem>& generators() const { return gens_; }
    std::vector<mpz_class> dlog(const residue_ring::res& r) const;
    std::vector<mpz_class> dlog(const quad_elem& t) const;
    const residue_ring& ring() const { return ring_; }
    // order of the image of the global units O_K^x
    long global_unit_image_order() const { return unit_im_; }

  private:
    residue_ring ring_;
    group_shape shape_;
    std::vector<quad_elem> gens_;
    std::map<residue_ring::res, std::vector<mpz_class>> dlog_;
    long unit_im_;
};

// Ray class group C_f = I_K(f) / P_{K,1}(f); f = (1) gives the class group,
// computed via reduced forms. Presentation from the exact sequence
//   (O/f)^x / im(O_K^x) -> C_f -> C_(1) -> 1
// glued by Smith normal form of the relation matrix.
class ray_class_group {
  public:
    ray_class_group(const quad_field& F, const quad_ideal& f);

    const quad_field& field() const { return F_; }
    const quad_ideal& modulus() const { return f_; }
    const group_shape& shape() const { return shape_; }
    const std::vector<quad_ideal>& generators() const { return gens_; }
    mpz_class order() const { return shape_.order(); }

    // A integral, coprime to f
    std::vector<mpz_class> dlog(const quad_ideal& A) const;
    bool same_class(const quad_ideal& A, const quad_ideal& B) const;
    bool is_ray_trivial(const quad_ideal& A) const;
    // an integral ideal coprime to f in the class with the given dlog vector
    quad_ideal class_rep(const std::vector<mpz_class>& v) const;
    // order predicted by h * |(O/f)^x| / |im O_K^x| (consistency anchor)
    mpz_class order_by_formula() const;

  private:
    std::vector<mpz_class> old_to_new(std::vector<mpz_class> vold) const;

    quad_field F_;
    quad_ideal f_;
    std::unique_ptr<unit_group_mod> units_;

    // class group side: basis ideals coprime to f with orders n_j
    std::vector<quad_ideal> c1_gens_;
    std::vector<mpz_class> c1_orders_;
    std::map<qform, std::vector<mpz_class>> c1_dlog_;
    std::vector<std::vector<mpz_class>> c1_gamma_dlog_;  // dlog_U of gamma_j
    std::vector<quad_elem> c1_gamma_;

    zmat V_;  // SNF column transform old -> new
    std::vector<mpz_class> snf_div_;   // all SNF diagonal entries
    std::vector<long> kept_;           // indices with divisor > 1
    group_shape shape_;
    std::vector<quad_ideal> gens_;
    mpz_class formula_order_;
};

// class number by reduced-form count
long class_number(long disc);

}  // namespace drwitt
