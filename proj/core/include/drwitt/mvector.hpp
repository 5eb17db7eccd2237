// Modular vectors on Deligne-Ribet monoids: normalized torsion coordinates
// evaluated over ideal lattices, certification of the values as algebraic
// numbers, equivariance / lambda-action / Frobenius-congruence verification,
// and comparison of the value congruence with the adelic one.
#pragma once

#include <vector>

#include "drwitt/drmonoid.hpp"
#include "drwitt/recognize.hpp"
#include "drwitt/theta.hpp"

namespace drwitt {

enum class selector_kind { fricke, weber, theta };

// coef * theta^k(u; tau) / theta^l(u; tau), characteristics of type [4]
struct ratio_term {
    theta_char k, l;
    mpq_class coef;
};

struct mvector_spec {
    selector_kind f = selector_kind::fricke;
    torsion_index a;                // 2-vector with common denominator N
    std::vector<ratio_term> terms;  // theta selector only
};

mvector_spec make_fricke_spec(long N);
mvector_spec make_weber_spec(std::vector<mpq_class> a, long N);
mvector_spec make_theta_spec(std::vector<mpq_class> a, long N,
                             std::vector<ratio_term> terms);

// exhaustive pole-margin check of every term at a.rho over all residues rho
bool spec_defined(const adelic_level& L, const mvector_spec& spec, long prec);

struct witt_component {
    bigcomplex approx;
    algebraic_value value;      // minpoly empty when unrecognized
    bool renormalized = false;  // torsion point fell into the lattice: j value
};

struct witt_vector {
    mvector_spec spec;
    std::vector<witt_component> comp;  // indexed like the monoid elements
    bool all_recognized = false;
    bool rep_independent = false;  // second-representative recomputation agreed
};

// value of the selector at the image of a * lift(rho) on C / s, with s an
// integral ideal coprime to the level; the torsion point is matched into
// N^{-1} s / s locally at the primes over N (multiplier in s with residue 1
// mod N); a lattice point yields the renormalized value j(s) and sets the flag
bigcomplex evaluate_component(const adelic_level& L, const mvector_spec& spec,
                              const residue_ring::res& rho, const quad_ideal& s,
                              long prec, bool* renormalized = nullptr);

witt_vector build_modular_vector(const adelic_level& L, const mvector_spec& spec,
                                 long prec, const recog_config& recog);

// per unit-action orbit: the coefficients of prod (X - value) must lie in K
struct orbit_report {
    std::vector<long> members;
    bool pass = false;
};
std::vector<orbit_report> verify_equivariance(const adelic_level& L,
                                              const witt_vector& v, long prec);

// (psi_p v)(x) = v(p x) through the multiplication table
witt_vector lambda_action(const adelic_level& L, const witt_vector& v,
                          const quad_ideal& p);

// psi_p v(x) - v(x)^{N p}: field norm of the denominator-cleared difference
// divisible by N p, decided exactly for K-rational components
struct component_report {
    long index = 0;
    bool exact = false;  // component value certified inside K
    bool pass = false;
};
struct frobenius_report {
    mpz_class denominator = 1;  // declared: denominator * values integral
    bool conclusive = false;    // every component decided exactly
    bool all_pass = false;
    std::vector<component_report> comp;
};
frobenius_report frobenius_congruence_check(const adelic_level& L,
                                            const witt_vector& v,
                                            const quad_ideal& p);

// comparable value ids for one vector: equal minimal polynomials with
// overlapping balls (numeric proximity alone for unrecognized values)
std::vector<long> value_ids(const witt_vector& v);

// D_xi for a single vector
partition congruence_of_vector(const adelic_level& L, const witt_vector& v);

struct simn_report {
    partition join;  // D over the whole family
    partition simn;
    bool equal = false;
};
simn_report compare_with_simn(const adelic_level& L,
                              const std::vector<witt_vector>& family);

// evaluate through the idele route (gsp action on tau, index times rho and
// the finite part u) and through the exact ideal-lattice route; both must
// agree within 2^{-prec+12}
struct crosscheck_report {
    bigcomplex lattice, idele;
    bool pass = false;
};
crosscheck_report crosscheck_theta_path(const adelic_level& L,
                                        const mvector_spec& spec,
                                        const residue_ring::res& rho,
                                        const quad_ideal& s, long prec);

}  // namespace drwitt
