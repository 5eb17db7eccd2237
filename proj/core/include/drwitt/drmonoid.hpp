// Finite Deligne-Ribet monoids DR_f = I_K / ~_f over imaginary quadratic K,
// their orbit decomposition over divisors d | f, monoid congruences, the
// finite-level adelic encoding (O/N x_{(O/N)^x} C_{NO_K}), and ~_N.
#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <vector>

#include "drwitt/quadfield.hpp"

namespace drwitt {

struct budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// definitional congruence: A ~_f B iff A B^{-1} = (t) with t - 1 in f B^{-1}
// (total positivity is vacuous here: no real places)
bool dr_congruent(const quad_field& F, const quad_ideal& A, const quad_ideal& B,
                  const quad_ideal& f);

// DR_f as an explicit finite monoid: canonical representatives (minimal norm,
// then lexicographic HNF), multiplication table, orbit labels d = gcd(rep, f).
class dr_monoid {
  public:
    // norm_budget 0 = automatic bound on the representative enumeration
    dr_monoid(const quad_field& F, const quad_ideal& f, long norm_budget = 0);

    const quad_field& field() const { return F_; }
    const quad_ideal& conductor() const { return f_; }
    long size() const { return (long)reps_.size(); }
    const quad_ideal& rep(long i) const { return reps_.at(i); }
    long one() const { return one_; }
    long mul(long i, long j) const { return mul_.at(i).at(j); }

    // class index of a nonzero integral ideal
    long classify(const quad_ideal& a) const;

    // divisors of f in canonical (norm, HNF) order; orbit k has ray class
    // group C_{f d_k^{-1}}
    const std::vector<quad_ideal>& divisor_list() const { return divs_; }
    long orbit_of(long i) const { return orbit_of_.at(i); }
    const ray_class_group& orbit_group(long k) const { return *orbits_.at(k); }

    // indices of the unit classes (orbit label (1)); they form a group = C_f
    const std::vector<long>& units() const { return units_; }

    // i -> classify(p * rep(i)); precomposition realizing the psi_p action
    std::vector<long> translation_by(const quad_ideal& p) const;

  private:
    quad_field F_;
    quad_ideal f_;
    std::vector<quad_ideal> divs_;
    std::vector<std::unique_ptr<ray_class_group>> orbits_;
    std::vector<quad_ideal> reps_;
    std::vector<long> orbit_of_;
    std::vector<long> units_;
    std::map<std::pair<long, std::vector<mpz_class>>, long> index_;
    long one_ = -1;
    std::vector<std::vector<long>> mul_;

    std::pair<long, std::vector<mpz_class>> key_of(const quad_ideal& a) const;
};

// index of each element of the finer monoid in the coarser one (conductor of
// `small` must divide the conductor of `big`); surjective and multiplicative
std::vector<long> dr_projection(const dr_monoid& big, const dr_monoid& small);

// partition of element indices into blocks, normalized so block ids appear in
// increasing element order starting at 0
using partition = std::vector<long>;

partition normalize_partition(const partition& p);
bool same_partition(const partition& p, const partition& q);
partition identity_partition(long n);
bool is_monoid_congruence(const dr_monoid& T, const partition& p);

// smallest congruence with x ~ y for the given seed pairs
partition congruence_closure(const dr_monoid& T, const std::vector<std::pair<long, long>>& pairs);

// D_Xi: x ~ y iff xi(x z) = xi(y z) for every z and every xi; each xi is a
// vector of comparable value ids indexed by element
partition vector_congruence(const dr_monoid& T, const std::vector<std::vector<long>>& xi);

// E_D at this level: indicator function of each block
std::vector<std::vector<long>> functions_through(const partition& p);

// finite-level adelic pair [rho, s]: a residue mod N and a ray class at N O_K,
// taken modulo the fiber action u.(rho, s) = (rho u, iota(u)^{-1} s)
struct adelic_pair {
    residue_ring::res rho;
    std::vector<mpz_class> s;
    bool operator==(const adelic_pair&) const = default;
};

// finite-level stand-in for Gal over K of the field generated by the
// rho-torsion: C_{N O_K dbar^{-1}} with dbar = gcd((lift rho), N O_K)
struct torsion_galois {
    quad_ideal dbar;
    const ray_class_group* group;
};

class adelic_level {
  public:
    adelic_level(const quad_field& F, long N);

    long level() const { return N_; }
    const quad_field& field() const { return F_; }
    const dr_monoid& monoid() const { return *M_; }
    const residue_ring& ring() const { return ring_; }
    const ray_class_group& level_group() const { return *CN_; }

    // canonical integral lift of a residue; 0 lifts to N (any nonzero lift
    // yields the same decoded class)
    quad_elem canonical_lift(const residue_ring::res& rho) const;

    torsion_galois torsion_field(const residue_ring::res& rho) const;

    adelic_pair encode(long class_index) const;
    long decode(const adelic_pair& p) const;
    adelic_pair act_unit(const residue_ring::res& u, const adelic_pair& p) const;

    // exists u in (O/N)^x with rho u = lambda and [s] = iota(u)[t]
    bool sim_n(const adelic_pair& x, const adelic_pair& y) const;
    std::optional<residue_ring::res> sim_n_witness(const adelic_pair& x,
                                                   const adelic_pair& y) const;

    // ~_N as a partition of the DR_{N O_K} element indices
    partition sim_n_congruence() const;

  private:
    quad_field F_;
    long N_;
    quad_ideal fN_;
    std::unique_ptr<dr_monoid> M_;
    residue_ring ring_;
    const ray_class_group* CN_;
    std::vector<residue_ring::res> units_;
};

}  // namespace drwitt
