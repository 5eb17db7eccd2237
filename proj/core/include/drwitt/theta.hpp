// Siegel theta functions with characteristics, theta ratios at torsion
// points, and theta-null vectors, all with certified error bounds.
#pragma once

#include <stdexcept>
#include <vector>

#include "drwitt/bigcomplex.hpp"
#include "drwitt/symplectic.hpp"

namespace drwitt {

// denominator indistinguishable from zero at the working precision
struct pole_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// characteristic k in delta^{-1} Z^g / Z^g (a rational column vector mod Z^g)
struct theta_char {
    std::vector<mpq_class> k;

    long g() const { return (long)k.size(); }
    bool operator==(const theta_char&) const = default;
};

// torsion index a = (a1, a2), a rational row 2g-vector mod Z^{2g}, with the
// common denominator N
struct torsion_index {
    std::vector<mpq_class> a;  // size 2g
    long N = 1;
};
torsion_index make_torsion(std::vector<mpq_class> a, long N);

// sum_{w in k + Z^g} exp(w^t tau w / 2 + u . w), exp(t) = e^{2 pi i t};
// truncated with a certified geometric tail bound below 2^{-prec-8}, which is
// folded into the returned radius together with all rounding
bigcomplex theta(const theta_char& k, const std::vector<bigcomplex>& u,
                 const siegel_point& tau, long prec);

// the torsion point a1 tau + a2 delta as a complex row vector
std::vector<bigcomplex> torsion_point(const torsion_index& a,
                                      const siegel_point& tau,
                                      const type_delta& delta, long prec);

// theta^k(a1 tau + a2 delta; tau) / theta^l(...); pole_error when the
// denominator lacks a margin of twice its radius
bigcomplex theta_ratio(const theta_char& k, const theta_char& l,
                       const torsion_index& a, const siegel_point& tau,
                       const type_delta& delta, long prec);

// [theta^k(0; tau)] over all d_1 ... d_g characteristics k = (m_i / d_i),
// ordered lexicographically by (m_1, ..., m_g); requires delta.embed_ok
std::vector<bigcomplex> theta_null_vector(const siegel_point& tau,
                                          const type_delta& delta, long prec);

// all characteristics of the type, in the null-vector order
std::vector<theta_char> theta_chars(const type_delta& delta);

}  // namespace drwitt
