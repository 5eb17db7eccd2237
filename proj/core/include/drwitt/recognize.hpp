// Certification of numeric values as algebraic numbers: lattice-reduction
// search for an integer minimal polynomial, residual bounds, and exact
// irreducibility screening at desk degrees.
#pragma once

#include <optional>
#include <vector>

#include "drwitt/bigcomplex.hpp"
#include "drwitt/quadfield.hpp"

namespace drwitt {

struct recog_config {
    long maxdeg = 24;
    long heightbits = 128;  // accepted coefficients below 2^heightbits
    long prec = 256;        // reference precision for residual thresholds
};

struct algebraic_value {
    bigcomplex approx;
    // primitive, positive leading coefficient, constant term first;
    // empty = unrecognized
    std::vector<mpz_class> minpoly;

    long degree() const { return minpoly.empty() ? -1 : (long)minpoly.size() - 1; }
    bool recognized() const { return !minpoly.empty(); }
};

// content removed, leading coefficient made positive, trailing zeros trimmed
std::vector<mpz_class> poly_primitive(std::vector<mpz_class> p);

bigcomplex poly_eval_z(const std::vector<mpz_class>& p, const bigcomplex& z);

// proof of irreducibility over Q: factor-degree patterns modulo several
// primes, completed where inconclusive by rounding conjugation-closed root
// subsets to candidate integer factors and exact division
bool poly_irreducible(const std::vector<mpz_class>& p, long prec = 256);

// deterministic search over degrees 1..maxdeg; returns the first candidate
// whose residual |p(z)| stays below 2^{-prec/2} * height(p)
algebraic_value recognize(const bigcomplex& z, const recog_config& cfg);

// numeric image of a field element under the distinguished embedding
// (omega maps to the upper-half-plane root of its minimal polynomial)
bigcomplex qe_embed(const quad_field& F, const quad_elem& e, long prec);

// exact representation x + y omega in K when the value has degree <= 2 and
// its minimal polynomial splits in K; verified by field arithmetic
std::optional<quad_elem> as_field_element(const quad_field& F,
                                          const algebraic_value& v);

}  // namespace drwitt
