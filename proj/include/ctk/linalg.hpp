#pragma once

#include <optional>
#include <vector>

#include "ctk/matrix.hpp"

namespace ctk {

// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... and d_i >= 0.
struct SmithDecomposition {
    IntMatrix U;
    IntMatrix D;
    IntMatrix V;
    std::size_t rank = 0;

    // d_1, ..., d_min(rows, cols)
    std::vector<Int> diagonal() const;
    // The nonzero diagonal entries.
    std::vector<Int> invariant_factors() const;
};

struct SmithOptions {
    bool left_transform = true;
    bool right_transform = true;
    // Also accumulate V^{-1}; needed to lift quotient coordinates back to generators.
    bool right_inverse = false;
};

struct SmithWithInverse {
    SmithDecomposition smith;
    IntMatrix V_inverse;
};

SmithDecomposition snf(const IntMatrix& A);
SmithWithInverse snf(const IntMatrix& A, const SmithOptions& options);

// Row Hermite form: T * A = H, pivots positive and strictly increasing, entries
// above a pivot reduced into [0, pivot). Zero rows are at the bottom.
struct HermiteForm {
    IntMatrix H;
    IntMatrix T;
    std::size_t rank = 0;
    std::vector<std::size_t> pivot_cols;
};

HermiteForm hnf(const IntMatrix& A);
// The nonzero rows of the Hermite form, without tracking the transform.
IntMatrix hnf_basis(const IntMatrix& A);

// Basis (rows) of the saturated integer left kernel {x : x A = 0}.
IntMatrix kernel_basis(const IntMatrix& A);

// Basis of (Q-span of rows of B) intersected with Z^cols. Rows of B must be independent.
IntMatrix saturate(const IntMatrix& B);

// Invariants d_1 | d_2 | ... (entries equal to 1 dropped) of the quotient
// (Z-span of amb) / (Z-span of sub). Rows of both must be bases of equal rank.
std::vector<Int> elementary_divisors(const IntMatrix& sub, const IntMatrix& amb);
std::vector<Int> elementary_divisors(const RatMatrix& sub, const RatMatrix& amb);

Int determinant(const IntMatrix& A);

// Exact rational linear algebra.
std::size_t rank(const RatMatrix& A);
std::size_t rank(const IntMatrix& A);
Rat determinant(const RatMatrix& A);
RatMatrix inverse(const RatMatrix& A);
// Reduced row echelon form; the pivot columns are written to *pivots.
RatMatrix rref(const RatMatrix& A, std::vector<std::size_t>* pivots = nullptr);
// Basis (rows) of {x : x A = 0}.
RatMatrix left_kernel(const RatMatrix& A);
// Basis (columns) of {y : A y = 0}.
RatMatrix right_kernel(const RatMatrix& A);
// Basis (rows) of the row space.
RatMatrix row_space(const RatMatrix& A);
// X with X A = B when it exists. A need not be square.
std::optional<RatMatrix> solve_left(const RatMatrix& A, const RatMatrix& B);
// Basis (rows) of the intersection of two row spaces inside Q^n.
RatMatrix intersect_row_spaces(const RatMatrix& A, const RatMatrix& B);
bool same_row_space(const RatMatrix& A, const RatMatrix& B);

}  // namespace ctk
