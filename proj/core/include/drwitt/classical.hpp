// Genus-one lattice functions: Eisenstein series, g2/g3/discriminant/j via
// q-expansions, Weierstrass p and p' via exponentially convergent q-series,
// and normalized (Fricke/Weber style) torsion coordinates on C/(Z w1 + Z w2).
#pragma once

#include "drwitt/bigcomplex.hpp"
#include "drwitt/quadfield.hpp"
#include "drwitt/theta.hpp"

namespace drwitt {

// pi as a width-one-ulp ball
bigcomplex bc_pi(long prec);

// normalized Eisenstein series E4, E6 of Z tau + Z; require Im tau > 1/8
bigcomplex eisenstein_e4(const bigcomplex& tau, long prec);
bigcomplex eisenstein_e6(const bigcomplex& tau, long prec);

// g2 = (2 pi)^4 E4 / 12, g3 = (2 pi)^6 E6 / 216, disc = g2^3 - 27 g3^2
// (computed by the eta product to avoid the cancellation), j = 1728 g2^3 / disc
struct lattice_values {
    bigcomplex g2, g3, disc, j;
};
lattice_values lattice_values_at(const bigcomplex& tau, long prec);
bigcomplex j_invariant(const bigcomplex& tau, long prec);

// Weierstrass functions of z on C/(Z tau + Z); the argument is reduced into
// the fundamental cell first; throws pole_error when z is within its radius
// of a lattice point
bigcomplex wp_value(const bigcomplex& z, const bigcomplex& tau, long prec);
bigcomplex wp_prime_value(const bigcomplex& z, const bigcomplex& tau, long prec);

// replace an oriented basis (a, b) of a complex lattice by a unimodular image
// with a/b near the standard fundamental domain; the lattice is unchanged
// exactly (only integer combinations and swaps are applied)
void gauss_reduce(bigcomplex& a, bigcomplex& b);

// scaling-invariant torsion coordinate: the generic kind is
// -2^7 3^5 (g2 g3 / disc) p(z), the square kind (g2^2 / disc) p(z)^2, the
// cube kind (g3 / disc) p(z)^3, each on the lattice Z w1 + Z w2
enum class weber_kind { generic, square, cube };
weber_kind weber_kind_for(const quad_field& F);
bigcomplex weber_value(const bigcomplex& z, const bigcomplex& w1,
                       const bigcomplex& w2, weber_kind kind, long prec);

// j of the lattice Z w1 + Z w2 (substituted for the coordinate at z = 0)
bigcomplex j_from_basis(const bigcomplex& w1, const bigcomplex& w2, long prec);

// j through fourth powers of theta nulls; independent of the q-expansion route
bigcomplex j_from_theta(const bigcomplex& tau, long prec);

}  // namespace drwitt
