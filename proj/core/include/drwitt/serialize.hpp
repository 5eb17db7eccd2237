// Deterministic JSON / CSV rendering of ideals, groups, monoid tables,
// matrices, certified values, and modular vectors, plus parsing of ideal
// literals; output is byte-stable across runs (sorted keys, no timestamps).
#pragma once

#include <string>

#include "drwitt/drmonoid.hpp"
#include "drwitt/intmat.hpp"
#include "drwitt/mvector.hpp"
#include "drwitt/quadfield.hpp"

namespace drwitt {

inline constexpr long schema_version = 1;

// {"re": "...", "im": "...", "err2exp": e} with decimal mantissas carrying
// the full working precision; err2exp is an upper bound err <= 2^e, null
// when the radius is exactly zero
std::string json_of_value(const bigcomplex& z);

// {"a": ..., "b": ..., "c": ..., "denom": ..., "disc": ...}
std::string json_of_ideal(const quad_ideal& A);
quad_ideal ideal_of_json(const std::string& text);

// {"divisors": [...], "generators": [ideals]}
std::string json_of_group(const ray_class_group& G);

// conductor, elements (by canonical representative), multiplication table,
// orbit labels with their divisors, unit subgroup indices
std::string json_of_monoid(const dr_monoid& T);

// row-major arrays of exact integer / rational strings
std::string json_of_zmat(const zmat& M);
std::string json_of_qmat(const qmat& M);

// {"conductor": ideal, "components": [{"class", "minpoly", "approx",
// "flags"}], "all_recognized": ..., "rep_independent": ...}
std::string json_of_vector(const adelic_level& L, const witt_vector& v);

// rows (class, orbit, degree, minpoly); degree 0 marks unrecognized entries
std::string csv_of_vector(const adelic_level& L, const witt_vector& v);

// "(g)" principal with g = x, x+y*i (disc -4 only) or x+y*w; "[a,b,c]" the
// ideal generated by a and b + c*w; bare integers mean the principal ideal
quad_ideal parse_ideal(const quad_field& F, const std::string& text);

}  // namespace drwitt
