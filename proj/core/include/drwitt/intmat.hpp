// Dense exact matrices over Z and Q: Smith normal form with transforms,
// Bareiss determinants, and LLL reduction of integer lattice bases.
#pragma once

#include <gmpxx.h>
#include <stdexcept>
#include <string>
#include <vector>

namespace drwitt {

inline void arg_check(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument(msg);
}
inline void logic_check(bool ok, const std::string& msg) {
    if (!ok) throw std::logic_error(msg);
}

struct zmat {
    long r = 0, c = 0;
    std::vector<mpz_class> e;

    zmat() = default;
    zmat(long rows, long cols) : r(rows), c(cols), e(rows * cols) {}
    mpz_class& at(long i, long j) { return e[i * c + j]; }
    const mpz_class& at(long i, long j) const { return e[i * c + j]; }
    bool operator==(const zmat&) const = default;
};

zmat zm_identity(long n);
zmat zm_mul(const zmat& A, const zmat& B);
zmat zm_transpose(const zmat& A);
zmat zm_neg(const zmat& A);
bool zm_is_zero(const zmat& A);
// exact determinant, fraction-free Gaussian elimination
mpz_class zm_det(const zmat& A);

// U*A*V = S with S diagonal, s_1 | s_2 | ... , s_i >= 0; U, V unimodular.
struct snf_result {
    zmat S, U, V;
};
snf_result snf(const zmat& A);

// Rows of B form the lattice basis; reduced in place (delta = 3/4).
// Exact rational Gram-Schmidt; fine at desk-scale dimensions.
void lll_reduce(zmat& B);

struct qmat {
    long r = 0, c = 0;
    std::vector<mpq_class> e;

    qmat() = default;
    qmat(long rows, long cols) : r(rows), c(cols), e(rows * cols) {}
    mpq_class& at(long i, long j) { return e[i * c + j]; }
    const mpq_class& at(long i, long j) const { return e[i * c + j]; }
    bool operator==(const qmat&) const = default;
};

qmat qm_identity(long n);
qmat qm_from_z(const zmat& A);
qmat qm_mul(const qmat& A, const qmat& B);
qmat qm_transpose(const qmat& A);
mpq_class qm_det(const qmat& A);
// throws std::invalid_argument on singular input
qmat qm_inverse(const qmat& A);
qmat qm_scale(const qmat& A, const mpq_class& s);

}  // namespace drwitt
