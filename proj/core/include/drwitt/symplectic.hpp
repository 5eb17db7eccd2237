// Integral alternating forms and their Frobenius reduction to type delta,
// Riemann forms from CM data, Siegel upper-half space points, the GSp action
// on tau, and the g=1 idele decomposition over imaginary quadratic fields.
#pragma once

#include <array>
#include <vector>

#include "drwitt/bigcomplex.hpp"
#include "drwitt/intmat.hpp"
#include "drwitt/quadfield.hpp"

namespace drwitt {

// polarization type [d_1, ..., d_g], d_i > 0, d_i | d_{i+1}
struct type_delta {
    std::vector<mpz_class> d;

    long g() const { return (long)d.size(); }
    // 3 <= d_1: theta embedding is projectively faithful
    bool embed_ok() const { return !d.empty() && d.front() >= 3; }
    // (4 <= d_1 and 2 | d_1) or 3 | d_1: strong level condition
    bool strong_ok() const {
        if (d.empty()) return false;
        return (d.front() >= 4 && d.front() % 2 == 0) || d.front() % 3 == 0;
    }
    bool operator==(const type_delta&) const = default;
};

// [[0, diag d], [-diag d, 0]], size 2g
zmat j_delta(const type_delta& delta);

// U E U^t = J_delta exactly, U unimodular; delta the elementary-divisor type
struct frobenius_result {
    zmat U;
    type_delta delta;
};
frobenius_result frobenius_reduce(const zmat& E);

// point of the Siegel upper half space: g x g complex, row-major
struct siegel_point {
    long g = 0;
    std::vector<bigcomplex> tau;

    const bigcomplex& at(long i, long j) const { return tau.at(i * g + j); }
    bigcomplex& at(long i, long j) { return tau.at(i * g + j); }
    long prec() const { return tau.empty() ? 64 : tau.front().prec(); }
};

// certified rational lower bound on the smallest eigenvalue of the symmetric
// part of Im tau (exact Sylvester check); <= 0 result means not certified
mpq_class siegel_lambda_lb(const siegel_point& tau);
// symmetry within 2^{-prec/2} and certified positive-definite imaginary part
void siegel_check(const siegel_point& tau);

// CM data: degree-2g field Q[x]/(minpoly), CM type as a selection of root
// indices into the canonically ordered root list, integral basis and the
// totally imaginary element as coefficient vectors in the generator
struct cm_data {
    std::vector<mpq_class> minpoly;  // monic, rational, degree 2g
    std::vector<long> phi;           // g root indices, pairwise non-conjugate
    std::vector<std::vector<mpq_class>> basis;  // 2g coefficient vectors
    std::vector<mpq_class> e;                   // coefficient vector
    long n = 1;                                 // positive integer scaling
};

// roots of a monic rational polynomial, ordered by (Re, Im); the radius of
// each ball certifies a nearby true root
std::vector<bigcomplex> poly_roots(const std::vector<mpq_class>& poly, long prec);

// complex conjugation as a polynomial in the generator: c with c(root) equal
// to the conjugate root for every embedding, verified exactly
std::vector<mpq_class> conj_poly(const std::vector<mpq_class>& minpoly, long prec);

// trace of a coefficient vector via exact Newton power sums
mpq_class field_trace(const std::vector<mpq_class>& minpoly,
                      const std::vector<mpq_class>& elem);

// n * Tr(e . b_i . conj(b_j)) over the basis; exact, checked integral and
// alternating nondegenerate; positivity of Im(phi_i(e)) checked numerically
zmat riemann_form_cm(const cm_data& data, long prec);

// embed a coefficient vector through the root of index k
bigcomplex cm_embed(const cm_data& data, const std::vector<mpq_class>& elem,
                    long k, long prec);

// tau with lattice rows = Z^g tau + Z^g delta; rows holds the 2g symplectic
// basis vectors of the lattice in C^g (first g = tau part, last g = delta
// part); the first block's sign is flipped if Im tau comes out negative
// definite
siegel_point tau_from_basis(const std::vector<std::vector<bigcomplex>>& rows,
                            const type_delta& delta);

// rational 2g x 2g M with M J_delta M^t = nu J_delta, nu > 0
struct gsp_element {
    qmat M;
    mpq_class nu;
};
gsp_element gsp_make(const qmat& M, const type_delta& delta);
// tau |-> (a tau + b delta)(c tau + d delta)^{-1} delta
siegel_point gsp_act(const gsp_element& alpha, const siegel_point& tau,
                     const type_delta& delta);

// canonical g=1 polarized CM frame over an imaginary quadratic field:
// e = (conj(omega) - omega)^{-1} scaled by n on the basis (1, omega)
struct g1_frame {
    quad_field F;
    quad_elem e;                     // totally imaginary, Im phi(e) > 0
    long n = 4;                      // scaling; delta = [n]
    std::array<quad_elem, 2> basis;  // (1, omega)
    zmat E;                          // n * psi_e on the basis
    type_delta delta;
    siegel_point tau;                // orientation-fixed, = -n/omega
};
g1_frame make_g1_frame(const quad_field& F, long n = 4, long prec = 256);

// finite part u (2x2 integer matrix mod N, invertible) and rational alpha
// with alpha J alpha^t = N(s) J for the lattice basis change O_K -> s
struct g1_idele {
    zmat u;
    gsp_element alpha;
};
g1_idele decompose_idele_g1(const quad_field& F, const quad_ideal& s, long N);

}  // namespace drwitt
