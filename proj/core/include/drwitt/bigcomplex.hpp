// Complex ball arithmetic on MPFR: midpoint (re, im) at the working precision
// plus an upward-rounded radius err with |true - midpoint| <= err.
#pragma once

#include <gmpxx.h>

// plain functions instead of macros so the RAII wrapper converts implicitly
#ifndef MPFR_USE_NO_MACRO
#define MPFR_USE_NO_MACRO
#endif
#include <mpfr.h>

#include <complex>
#include <stdexcept>
#include <string>

namespace drwitt {

// raised when a result cannot be certified at the working precision
// (division by a ball containing 0, tail bound unreachable, lambda floor)
struct precision_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// RAII mpfr_t with value semantics; converts to mpfr_ptr for direct mpfr_* use
struct bigfloat {
    mpfr_t v;

    explicit bigfloat(long prec = 64) {
        mpfr_init2(v, prec);
        mpfr_set_zero(v, 1);
    }
    bigfloat(const bigfloat& o) {
        mpfr_init2(v, mpfr_get_prec(o.v));
        mpfr_set(v, o.v, MPFR_RNDN);
    }
    bigfloat(bigfloat&& o) noexcept {
        mpfr_init2(v, mpfr_get_prec(o.v));
        mpfr_swap(v, o.v);
    }
    bigfloat& operator=(const bigfloat& o) {
        if (this != &o) {
            mpfr_set_prec(v, mpfr_get_prec(o.v));
            mpfr_set(v, o.v, MPFR_RNDN);
        }
        return *this;
    }
    bigfloat& operator=(bigfloat&& o) noexcept {
        mpfr_swap(v, o.v);
        return *this;
    }
    ~bigfloat() { mpfr_clear(v); }

    operator mpfr_ptr() { return v; }
    operator mpfr_srcptr() const { return v; }
    long prec() const { return mpfr_get_prec(v); }
    double to_double() const { return mpfr_get_d(v, MPFR_RNDN); }
};

bigfloat bf_from_q(const mpq_class& q, long prec);
mpq_class bf_to_q(mpfr_srcptr x);  // exact binary-to-rational conversion

class bigcomplex {
  public:
    bigfloat re, im;  // midpoint
    bigfloat err;     // radius bound, low precision, always rounded up

    explicit bigcomplex(long prec = 64);
    long prec() const { return re.prec(); }
    std::complex<double> to_complex_d() const {
        return {re.to_double(), im.to_double()};
    }
};

bigcomplex bc_zero(long prec);
bigcomplex bc_from_q(const mpq_class& re, const mpq_class& im, long prec);
bigcomplex bc_from_d(double re, double im, long prec);

// same ball carried at a new midpoint precision (exact when raising)
bigcomplex bc_at_prec(const bigcomplex& a, long prec);

bigcomplex bc_add(const bigcomplex& a, const bigcomplex& b);
bigcomplex bc_sub(const bigcomplex& a, const bigcomplex& b);
bigcomplex bc_neg(const bigcomplex& a);
bigcomplex bc_conj(const bigcomplex& a);
bigcomplex bc_mul(const bigcomplex& a, const bigcomplex& b);
bigcomplex bc_div(const bigcomplex& a, const bigcomplex& b);  // throws precision_error
bigcomplex bc_inv(const bigcomplex& a);
bigcomplex bc_scale_q(const mpq_class& q, const bigcomplex& a);
bigcomplex bc_pow_ui(const bigcomplex& a, unsigned long n);

// e^{2 pi i z}
bigcomplex bc_exp2pii(const bigcomplex& z);

// inflate the radius by 2^e (truncation-tail accounting)
void bc_widen_2exp(bigcomplex& z, long e);

bigfloat bc_abs_ub(const bigcomplex& a);  // upper bound on |true value|
bigfloat bc_abs_lb(const bigcomplex& a);  // lower bound on |true value| (>= 0)
// certified upper bound on |a - b| (midpoint distance + both radii)
bigfloat bc_dist_ub(const bigcomplex& a, const bigcomplex& b);
// true if the certified distance is below 2^e
bool bc_close_2exp(const bigcomplex& a, const bigcomplex& b, long e);

// sentinel for a zero radius
inline constexpr long bc_exact_exp = -(1L << 40);
// smallest integer k with err <= 2^k (bc_exact_exp when err = 0)
long bc_err2exp(const bigcomplex& a);

// decimal rendering of a component, digits clipped to the certified accuracy
std::string bc_dec(mpfr_srcptr x, long err2exp);
std::string bc_dec_re(const bigcomplex& a);
std::string bc_dec_im(const bigcomplex& a);

}  // namespace drwitt
