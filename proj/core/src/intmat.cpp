#include "drwitt/intmat.hpp"

#include <algorithm>
#include <cstdlib>

namespace drwitt {

zmat zm_identity(long n) {
    zmat I(n, n);
    for (long i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

zmat zm_mul(const zmat& A, const zmat& B) {
    arg_check(A.c == B.r, "zm_mul: shape mismatch");
    zmat C(A.r, B.c);
    mpz_class t;
    for (long i = 0; i < A.r; ++i)
        for (long k = 0; k < A.c; ++k) {
            if (A.at(i, k) == 0) continue;
            for (long j = 0; j < B.c; ++j) {
                t = A.at(i, k) * B.at(k, j);
                C.at(i, j) += t;
            }
        }
    return C;
}

zmat zm_transpose(const zmat& A) {
    zmat T(A.c, A.r);
    for (long i = 0; i < A.r; ++i)
        for (long j = 0; j < A.c; ++j) T.at(j, i) = A.at(i, j);
    return T;
}

zmat zm_neg(const zmat& A) {
    zmat B = A;
    for (auto& x : B.e) x = -x;
    return B;
}

bool zm_is_zero(const zmat& A) {
    for (const auto& x : A.e)
        if (x != 0) return false;
    return true;
}

mpz_class zm_det(const zmat& A) {
    arg_check(A.r == A.c, "zm_det: square matrix required");
    long n = A.r;
    if (n == 0) return 1;
    zmat M = A;
    mpz_class prev = 1;
    int sign = 1;
    for (long k = 0; k + 1 < n; ++k) {
        if (M.at(k, k) == 0) {
            long p = -1;
            for (long i = k + 1; i < n; ++i)
                if (M.at(i, k) != 0) { p = i; break; }
            if (p < 0) return 0;
            for (long j = 0; j < n; ++j) std::swap(M.at(k, j), M.at(p, j));
            sign = -sign;
        }
        // Bareiss step: M[i][j] = (M[k][k]M[i][j] - M[i][k]M[k][j]) / prev
        for (long i = k + 1; i < n; ++i)
            for (long j = k + 1; j < n; ++j) {
                mpz_class t = M.at(k, k) * M.at(i, j) - M.at(i, k) * M.at(k, j);
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                M.at(i, j) = t;
            }
        prev = M.at(k, k);
    }
    return sign > 0 ? M.at(n - 1, n - 1) : mpz_class(-M.at(n - 1, n - 1));
}

namespace {

// helpers recording row/column operations of the Smith reduction
struct snf_work {
    zmat M, U, V;
    void row_swap(long i, long j) {
        if (i == j) return;
        for (long t = 0; t < M.c; ++t) std::swap(M.at(i, t), M.at(j, t));
        for (long t = 0; t < U.c; ++t) std::swap(U.at(i, t), U.at(j, t));
    }
    void col_swap(long i, long j) {
        if (i == j) return;
        for (long t = 0; t < M.r; ++t) std::swap(M.at(t, i), M.at(t, j));
        for (long t = 0; t < V.r; ++t) std::swap(V.at(t, i), V.at(t, j));
    }
    void row_add(long i, long j, const mpz_class& q) {  // row_i += q*row_j
        if (q == 0) return;
        for (long t = 0; t < M.c; ++t) M.at(i, t) += q * M.at(j, t);
        for (long t = 0; t < U.c; ++t) U.at(i, t) += q * U.at(j, t);
    }
    void col_add(long i, long j, const mpz_class& q) {  // col_i += q*col_j
        if (q == 0) return;
        for (long t = 0; t < M.r; ++t) M.at(t, i) += q * M.at(t, j);
        for (long t = 0; t < V.r; ++t) V.at(t, i) += q * V.at(t, j);
    }
    void row_neg(long i) {
        for (long t = 0; t < M.c; ++t) M.at(i, t) = -M.at(i, t);
        for (long t = 0; t < U.c; ++t) U.at(i, t) = -U.at(i, t);
    }
};

mpz_class fdiv_q(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

snf_result snf(const zmat& A) {
    snf_work w{A, zm_identity(A.r), zm_identity(A.c)};
    long n = std::min(A.r, A.c);
    for (long k = 0; k < n; ++k) {
        // locate a pivot of minimal absolute value in the trailing block
        auto find_pivot = [&]() -> std::pair<long, long> {
            long pi = -1, pj = -1;
            mpz_class best;
            for (long i = k; i < w.M.r; ++i)
                for (long j = k; j < w.M.c; ++j) {
                    const mpz_class& x = w.M.at(i, j);
                    if (x == 0) continue;
                    mpz_class a = abs(x);
                    if (pi < 0 || a < best) { best = a; pi = i; pj = j; }
                }
            return {pi, pj};
        };
        for (;;) {
            auto [pi, pj] = find_pivot();
            if (pi < 0) { k = n; break; }  // trailing block zero
            w.row_swap(k, pi);
            w.col_swap(k, pj);
            bool clean = true;
            for (long i = k + 1; i < w.M.r; ++i) {
                if (w.M.at(i, k) == 0) continue;
                w.row_add(i, k, -fdiv_q(w.M.at(i, k), w.M.at(k, k)));
                if (w.M.at(i, k) != 0) clean = false;
            }
            for (long j = k + 1; j < w.M.c; ++j) {
                if (w.M.at(k, j) == 0) continue;
                w.col_add(j, k, -fdiv_q(w.M.at(k, j), w.M.at(k, k)));
                if (w.M.at(k, j) != 0) clean = false;
            }
            if (!clean) continue;  // smaller remainder appeared; re-pivot
            // pivot must divide trailing block for the divisor chain
            bool div_ok = true;
            for (long i = k + 1; i < w.M.r && div_ok; ++i)
                for (long j = k + 1; j < w.M.c && div_ok; ++j)
                    if (w.M.at(i, j) % w.M.at(k, k) != 0) {
                        w.row_add(k, i, 1);
                        div_ok = false;
                    }
            if (div_ok) break;
        }
        if (k >= n) break;
        if (w.M.at(k, k) < 0) w.row_neg(k);
    }
    logic_check(zm_mul(zm_mul(w.U, A), w.V) == w.M, "snf: transform mismatch");
    return {w.M, w.U, w.V};
}

namespace {

mpq_class q_dot(const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
    mpq_class s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

void lll_reduce(zmat& B) {
    const long k = B.r, n = B.c;
    if (k <= 1) return;
    // rational Gram-Schmidt data: bstar (as rows), mu, and |bstar_i|^2
    std::vector<std::vector<mpq_class>> bstar(k, std::vector<mpq_class>(n));
    std::vector<std::vector<mpq_class>> mu(k, std::vector<mpq_class>(k));
    std::vector<mpq_class> Bn(k);

    auto row_q = [&](long i) {
        std::vector<mpq_class> v(n);
        for (long j = 0; j < n; ++j) v[j] = mpq_class(B.at(i, j));
        return v;
    };
    auto gso_from = [&](long start) {
        for (long i = start; i < k; ++i) {
            auto v = row_q(i);
            bstar[i] = v;
            for (long j = 0; j < i; ++j) {
                if (Bn[j] == 0) { mu[i][j] = 0; continue; }
                mu[i][j] = q_dot(v, bstar[j]) / Bn[j];
                for (long t = 0; t < n; ++t) bstar[i][t] -= mu[i][j] * bstar[j][t];
            }
            mu[i][i] = 1;  // so size reduction against row j also updates mu[i][j]
            Bn[i] = q_dot(bstar[i], bstar[i]);
        }
    };
    auto size_reduce = [&](long i, long j) {
        // make |mu_ij| <= 1/2 via b_i -= round(mu_ij) b_j
        mpq_class m = mu[i][j];
        mpz_class num = m.get_num(), den = m.get_den();
        mpz_class twice = 2 * num, q;
        // nearest integer to num/den
        mpz_class r;
        mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
        if (2 * r > den) q += 1;
        if (q == 0) return;
        for (long t = 0; t < n; ++t) B.at(i, t) -= q * B.at(j, t);
        for (long t = 0; t <= j; ++t) mu[i][t] -= mpq_class(q) * mu[j][t];
        (void)twice;
    };

    gso_from(0);
    long i = 1;
    const mpq_class delta(3, 4);
    while (i < k) {
        for (long j = i - 1; j >= 0; --j) size_reduce(i, j);
        mpq_class lhs = Bn[i];
        mpq_class rhs = (delta - mu[i][i - 1] * mu[i][i - 1]) * Bn[i - 1];
        if (lhs < rhs) {
            for (long t = 0; t < n; ++t) std::swap(B.at(i, t), B.at(i - 1, t));
            gso_from(i - 1);
            i = std::max(i - 1, 1L);
        } else {
            ++i;
        }
    }
}

qmat qm_identity(long n) {
    qmat I(n, n);
    for (long i = 0; i < n; ++i) I.at(i, i) = 1;
    return I;
}

qmat qm_from_z(const zmat& A) {
    qmat B(A.r, A.c);
    for (size_t i = 0; i < A.e.size(); ++i) B.e[i] = mpq_class(A.e[i]);
    return B;
}

qmat qm_mul(const qmat& A, const qmat& B) {
    arg_check(A.c == B.r, "qm_mul: shape mismatch");
    qmat C(A.r, B.c);
    for (long i = 0; i < A.r; ++i)
        for (long k = 0; k < A.c; ++k) {
            if (A.at(i, k) == 0) continue;
            for (long j = 0; j < B.c; ++j) C.at(i, j) += A.at(i, k) * B.at(k, j);
        }
    return C;
}

qmat qm_transpose(const qmat& A) {
    qmat T(A.c, A.r);
    for (long i = 0; i < A.r; ++i)
        for (long j = 0; j < A.c; ++j) T.at(j, i) = A.at(i, j);
    return T;
}

namespace {

// Gauss-Jordan over Q on [A | B]; returns false if A singular
bool solve_gj(qmat& A, qmat& B) {
    long n = A.r;
    for (long k = 0; k < n; ++k) {
        long p = -1;
        for (long i = k; i < n; ++i)
            if (A.at(i, k) != 0) { p = i; break; }
        if (p < 0) return false;
        if (p != k) {
            for (long j = 0; j < n; ++j) std::swap(A.at(k, j), A.at(p, j));
            for (long j = 0; j < B.c; ++j) std::swap(B.at(k, j), B.at(p, j));
        }
        mpq_class inv = 1 / A.at(k, k);
        for (long j = 0; j < n; ++j) A.at(k, j) *= inv;
        for (long j = 0; j < B.c; ++j) B.at(k, j) *= inv;
        for (long i = 0; i < n; ++i) {
            if (i == k || A.at(i, k) == 0) continue;
            mpq_class f = A.at(i, k);
            for (long j = 0; j < n; ++j) A.at(i, j) -= f * A.at(k, j);
            for (long j = 0; j < B.c; ++j) B.at(i, j) -= f * B.at(k, j);
        }
    }
    return true;
}

}  // namespace

mpq_class qm_det(const qmat& A) {
    arg_check(A.r == A.c, "qm_det: square matrix required");
    qmat M = A;
    mpq_class det = 1;
    long n = A.r;
    for (long k = 0; k < n; ++k) {
        long p = -1;
        for (long i = k; i < n; ++i)
            if (M.at(i, k) != 0) { p = i; break; }
        if (p < 0) return 0;
        if (p != k) {
            for (long j = 0; j < n; ++j) std::swap(M.at(k, j), M.at(p, j));
            det = -det;
        }
        det *= M.at(k, k);
        mpq_class inv = 1 / M.at(k, k);
        for (long i = k + 1; i < n; ++i) {
            if (M.at(i, k) == 0) continue;
            mpq_class f = M.at(i, k) * inv;
            for (long j = k; j < n; ++j) M.at(i, j) -= f * M.at(k, j);
        }
    }
    return det;
}

qmat qm_inverse(const qmat& A) {
    arg_check(A.r == A.c, "qm_inverse: square matrix required");
    qmat M = A, I = qm_identity(A.r);
    arg_check(solve_gj(M, I), "qm_inverse: singular matrix");
    return I;
}

qmat qm_scale(const qmat& A, const mpq_class& s) {
    qmat B = A;
    for (auto& x : B.e) x *= s;
    return B;
}

}  // namespace drwitt
