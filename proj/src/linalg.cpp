#include "ctk/linalg.hpp"

#include <algorithm>

namespace ctk {

std::vector<Int> SmithDecomposition::diagonal() const {
    std::vector<Int> d;
    for (std::size_t i = 0; i < std::min(D.rows(), D.cols()); ++i) d.push_back(D(i, i));
    return d;
}

std::vector<Int> SmithDecomposition::invariant_factors() const {
    std::vector<Int> d;
    for (std::size_t i = 0; i < rank; ++i) d.push_back(D(i, i));
    return d;
}

namespace {

// Elimination state for Smith form. Every operation on D is mirrored on the
// requested transforms so that U * A * V = D holds throughout.
struct SmithState {
    IntMatrix D;
    IntMatrix U, V, Vi;
    bool left, right, inv;

    void swap_rows(std::size_t a, std::size_t b) {
        D.swap_rows(a, b);
        if (left) U.swap_rows(a, b);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        D.swap_cols(a, b);
        if (right) V.swap_cols(a, b);
        if (inv) Vi.swap_rows(a, b);
    }
    void add_row(std::size_t dst, std::size_t src, const Int& k) {
        D.add_row_multiple(dst, src, k);
        if (left) U.add_row_multiple(dst, src, k);
    }
    void add_col(std::size_t dst, std::size_t src, const Int& k) {
        D.add_col_multiple(dst, src, k);
        if (right) V.add_col_multiple(dst, src, k);
        if (inv) Vi.add_row_multiple(src, dst, Int(-k));
    }
    void negate_row(std::size_t i) {
        D.negate_row(i);
        if (left) U.negate_row(i);
    }
};

Int tdiv(const Int& a, const Int& b) {
    Int q;
    mpz_tdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

SmithWithInverse snf(const IntMatrix& A, const SmithOptions& options) {
    const std::size_t m = A.rows(), n = A.cols();
    SmithState s{A,
                 options.left_transform ? IntMatrix::identity(m) : IntMatrix(),
                 options.right_transform ? IntMatrix::identity(n) : IntMatrix(),
                 options.right_inverse ? IntMatrix::identity(n) : IntMatrix(),
                 options.left_transform, options.right_transform, options.right_inverse};
    IntMatrix& D = s.D;

    std::size_t t = 0;
    for (; t < std::min(m, n); ++t) {
        // Pivot of least absolute value in the trailing block.
        std::size_t pi = m, pj = n;
        Int best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (D(i, j) == 0) continue;
                Int a = abs(D(i, j));
                if (pi == m || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                }
            }
        if (pi == m) break;
        s.swap_rows(t, pi);
        s.swap_cols(t, pj);

        for (;;) {
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (D(i, t) == 0) continue;
                s.add_row(i, t, Int(-tdiv(D(i, t), D(t, t))));
                if (D(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (D(t, j) == 0) continue;
                s.add_col(j, t, Int(-tdiv(D(t, j), D(t, t))));
                if (D(t, j) != 0) clean = false;
            }
            if (!clean) {
                // A remainder smaller than the pivot survived: promote it.
                std::size_t bi = t, bj = t;
                Int b = abs(D(t, t));
                for (std::size_t i = t + 1; i < m; ++i)
                    if (D(i, t) != 0 && abs(D(i, t)) < b) {
                        b = abs(D(i, t));
                        bi = i;
                        bj = t;
                    }
                for (std::size_t j = t + 1; j < n; ++j)
                    if (D(t, j) != 0 && abs(D(t, j)) < b) {
                        b = abs(D(t, j));
                        bi = t;
                        bj = j;
                    }
                s.swap_rows(t, bi);
                s.swap_cols(t, bj);
                continue;
            }
            // Row and column are clear; enforce divisibility of the trailing block.
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!mpz_divisible_p(D(i, j).get_mpz_t(), D(t, t).get_mpz_t())) {
                        s.add_row(t, i, Int(1));
                        divisible = false;
                        break;
                    }
            if (divisible) break;
        }
        if (D(t, t) < 0) s.negate_row(t);
    }

    SmithWithInverse out;
    out.smith.D = std::move(s.D);
    out.smith.U = std::move(s.U);
    out.smith.V = std::move(s.V);
    out.smith.rank = t;
    out.V_inverse = std::move(s.Vi);
    return out;
}

SmithDecomposition snf(const IntMatrix& A) { return snf(A, SmithOptions{}).smith; }

namespace {

HermiteForm hermite(const IntMatrix& A, bool track) {
    const std::size_t m = A.rows(), n = A.cols();
    HermiteForm out;
    out.H = A;
    if (track) out.T = IntMatrix::identity(m);
    IntMatrix& H = out.H;
    auto swap_rows = [&](std::size_t a, std::size_t b) {
        H.swap_rows(a, b);
        if (track) out.T.swap_rows(a, b);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, const Int& k) {
        H.add_row_multiple(dst, src, k);
        if (track) out.T.add_row_multiple(dst, src, k);
    };

    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        for (;;) {
            std::size_t best = m;
            for (std::size_t i = r; i < m; ++i)
                if (H(i, c) != 0 && (best == m || abs(H(i, c)) < abs(H(best, c)))) best = i;
            if (best == m) break;
            swap_rows(r, best);
            bool clear = true;
            for (std::size_t i = r + 1; i < m; ++i) {
                if (H(i, c) == 0) continue;
                add_row(i, r, Int(-fdiv(H(i, c), H(r, c))));
                if (H(i, c) != 0) clear = false;
            }
            if (clear) break;
        }
        if (r >= m || H(r, c) == 0) continue;
        if (H(r, c) < 0) {
            H.negate_row(r);
            if (track) out.T.negate_row(r);
        }
        for (std::size_t i = 0; i < r; ++i) add_row(i, r, Int(-fdiv(H(i, c), H(r, c))));
        out.pivot_cols.push_back(c);
        ++r;
    }
    out.rank = r;
    return out;
}

}  // namespace

HermiteForm hnf(const IntMatrix& A) { return hermite(A, true); }

IntMatrix hnf_basis(const IntMatrix& A) {
    HermiteForm h = hermite(A, false);
    return h.H.select_rows(0, h.rank);
}

IntMatrix kernel_basis(const IntMatrix& A) {
    HermiteForm h = hnf(A);
    IntMatrix k = h.T.select_rows(h.rank, A.rows());
    return hnf_basis(k);
}

IntMatrix saturate(const IntMatrix& B) {
    if (B.rows() == 0) return IntMatrix(0, B.cols());
    if (rank(B) != B.rows()) throw DomainError("saturate: rows are linearly dependent over Q");
    IntMatrix orth = kernel_basis(B.transpose());
    IntMatrix sat = kernel_basis(orth.rows() == 0 ? IntMatrix(B.cols(), 0) : orth.transpose());
    return sat;
}

std::vector<Int> elementary_divisors(const IntMatrix& sub, const IntMatrix& amb) {
    if (sub.cols() != amb.cols()) throw DomainError("elementary_divisors: ambient dimensions differ");
    IntMatrix s = hnf_basis(sub), a = hnf_basis(amb);
    if (s.rows() != a.rows()) throw DomainError("elementary_divisors: ranks differ, quotient is infinite");
    auto x = solve_left(to_rational(a), to_rational(s));
    if (!x) throw DomainError("elementary_divisors: sub is not contained in the rational span of amb");
    auto xi = to_integer(*x);
    if (!xi) throw DomainError("elementary_divisors: not a sublattice");
    std::vector<Int> out;
    for (const auto& d : snf(*xi, SmithOptions{false, false, false}).smith.invariant_factors())
        if (d != 1) out.push_back(d);
    return out;
}

std::vector<Int> elementary_divisors(const RatMatrix& sub, const RatMatrix& amb) {
    Int d1, d2;
    clear_denominators(sub, &d1);
    clear_denominators(amb, &d2);
    Rat scale(lcm(d1, d2));
    auto s = to_integer(scale * sub);
    auto a = to_integer(scale * amb);
    return elementary_divisors(*s, *a);
}

Int determinant(const IntMatrix& A) {
    if (!A.is_square()) throw DomainError("determinant of non-square matrix");
    const std::size_t n = A.rows();
    if (n == 0) return 1;
    IntMatrix M = A;
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (M(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && M(p, k) == 0) ++p;
            if (p == n) return 0;
            M.swap_rows(k, p);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) {
                Int v = M(i, j) * M(k, k) - M(i, k) * M(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                M(i, j) = v;
            }
        prev = M(k, k);
    }
    return sign * M(n - 1, n - 1);
}

RatMatrix rref(const RatMatrix& A, std::vector<std::size_t>* pivots) {
    RatMatrix R = A;
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < R.cols() && r < R.rows(); ++c) {
        std::size_t p = r;
        while (p < R.rows() && R(p, c) == 0) ++p;
        if (p == R.rows()) continue;
        R.swap_rows(r, p);
        Rat inv = 1 / R(r, c);
        for (std::size_t j = c; j < R.cols(); ++j) R(r, j) *= inv;
        for (std::size_t i = 0; i < R.rows(); ++i)
            if (i != r && R(i, c) != 0) R.add_row_multiple(i, r, Rat(-R(i, c)));
        piv.push_back(c);
        ++r;
    }
    if (pivots) *pivots = std::move(piv);
    return R;
}

std::size_t rank(const RatMatrix& A) {
    std::vector<std::size_t> piv;
    rref(A, &piv);
    return piv.size();
}

std::size_t rank(const IntMatrix& A) { return rank(to_rational(A)); }

Rat determinant(const RatMatrix& A) {
    if (!A.is_square()) throw DomainError("determinant of non-square matrix");
    RatMatrix M = A;
    Rat det = 1;
    const std::size_t n = M.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && M(p, c) == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            M.swap_rows(p, c);
            det = -det;
        }
        det *= M(c, c);
        for (std::size_t i = c + 1; i < n; ++i)
            if (M(i, c) != 0) M.add_row_multiple(i, c, Rat(-M(i, c) / M(c, c)));
    }
    return det;
}

RatMatrix inverse(const RatMatrix& A) {
    if (!A.is_square()) throw DomainError("inverse of non-square matrix");
    const std::size_t n = A.rows();
    std::vector<std::size_t> piv;
    RatMatrix R = rref(hstack(A, RatMatrix::identity(n)), &piv);
    if (piv.size() < n || (n > 0 && piv[n - 1] != n - 1)) throw DomainError("matrix is singular");
    return R.select_cols(n, 2 * n);
}

RatMatrix right_kernel(const RatMatrix& A) {
    std::vector<std::size_t> piv;
    RatMatrix R = rref(A, &piv);
    const std::size_t n = A.cols();
    std::vector<bool> is_pivot(n, false);
    for (auto c : piv) is_pivot[c] = true;
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < n; ++c)
        if (!is_pivot[c]) free.push_back(c);
    RatMatrix K(n, free.size());
    for (std::size_t k = 0; k < free.size(); ++k) {
        K(free[k], k) = 1;
        for (std::size_t r = 0; r < piv.size(); ++r) K(piv[r], k) = -R(r, free[k]);
    }
    return K;
}

RatMatrix left_kernel(const RatMatrix& A) { return right_kernel(A.transpose()).transpose(); }

RatMatrix row_space(const RatMatrix& A) {
    std::vector<std::size_t> piv;
    RatMatrix R = rref(A, &piv);
    return R.select_rows(0, piv.size());
}

std::optional<RatMatrix> solve_left(const RatMatrix& A, const RatMatrix& B) {
    // X A = B  <=>  A^t X^t = B^t
    if (A.cols() != B.cols()) throw DomainError("solve_left: column mismatch");
    const std::size_t m = A.rows();
    RatMatrix At = A.transpose(), Bt = B.transpose();
    std::vector<std::size_t> piv;
    RatMatrix R = rref(hstack(At, Bt), &piv);
    for (auto c : piv)
        if (c >= m) return std::nullopt;
    RatMatrix Xt(m, B.rows());
    for (std::size_t r = 0; r < piv.size(); ++r)
        for (std::size_t k = 0; k < B.rows(); ++k) Xt(piv[r], k) = R(r, m + k);
    return Xt.transpose();
}

RatMatrix intersect_row_spaces(const RatMatrix& A, const RatMatrix& B) {
    if (A.rows() == 0 || B.rows() == 0) return RatMatrix(0, A.cols());
    RatMatrix K = left_kernel(vstack(A, B));
    if (K.rows() == 0) return RatMatrix(0, A.cols());
    RatMatrix coeffs = K.select_cols(0, A.rows());
    return row_space(coeffs * A);
}

bool same_row_space(const RatMatrix& A, const RatMatrix& B) {
    if (A.cols() != B.cols()) return false;
    std::size_t ra = rank(A);
    return ra == rank(B) && ra == rank(vstack(A, B));
}

}  // namespace ctk
