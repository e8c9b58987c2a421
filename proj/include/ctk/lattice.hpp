#pragma once

#include <optional>
#include <vector>

#include "ctk/linalg.hpp"

namespace ctk {

// A Z-lattice spanned by rationally independent rows inside Q^n. The stored basis is
// canonical: with d the least common denominator, d * basis is in Hermite form.
// Two lattices are equal iff their canonical bases are equal.
class Lattice {
public:
    Lattice() = default;

    // Rows must be linearly independent over Q.
    static Lattice from_basis(const RatMatrix& basis);
    // Any finite generating set; rows may be dependent. cols gives the ambient
    // dimension when there are no rows.
    static Lattice from_generators(const RatMatrix& generators);
    static Lattice standard(std::size_t n);
    static Lattice zero(std::size_t ambient_dim);

    std::size_t ambient_dim() const noexcept { return ambient_dim_; }
    std::size_t rank() const noexcept { return basis_.rows(); }
    bool full_rank() const noexcept { return rank() == ambient_dim_; }
    const RatMatrix& basis() const noexcept { return basis_; }
    // Least d with d * L inside Z^n.
    const Int& denominator() const noexcept { return denominator_; }

    bool contains(std::span<const Rat> v) const;
    bool contains(const Lattice& other) const;

    Lattice scaled(const Rat& c) const;

    friend bool operator==(const Lattice& a, const Lattice& b) {
        return a.ambient_dim_ == b.ambient_dim_ && a.basis_ == b.basis_;
    }
    friend Lattice operator+(const Lattice& a, const Lattice& b);

private:
    std::size_t ambient_dim_ = 0;
    RatMatrix basis_;
    Int denominator_ = 1;
};

// <v, w> = v * gram * w^t for v in V (rows of gram), w in W (columns of gram).
struct BilinearPairing {
    RatMatrix gram;

    static BilinearPairing standard(std::size_t n) { return {RatMatrix::identity(n)}; }
    std::size_t left_dim() const { return gram.rows(); }
    std::size_t right_dim() const { return gram.cols(); }
    BilinearPairing transposed() const { return {gram.transpose()}; }
    Rat operator()(std::span<const Rat> v, std::span<const Rat> w) const;
};

// Gram matrix of two bases: rows of a against rows of b.
RatMatrix gram_matrix(const RatMatrix& a, const RatMatrix& b, const BilinearPairing& pairing);

// For M inside W (the right-hand space), the lattice {v in S : <v, w> in Z for all w in M}.
// S defaults to V when M has full rank, and otherwise to the image of span(M)
// under the pairing. Rejects a degenerate restriction of the pairing.
Lattice dual_lattice(const Lattice& M, const BilinearPairing& pairing, const std::optional<RatMatrix>& target = std::nullopt);
// The same with M inside V and the dual taken in W.
Lattice dual_lattice_left(const Lattice& L, const BilinearPairing& pairing, const std::optional<RatMatrix>& target = std::nullopt);

// L intersected with the rational row space of S.
Lattice intersect_with_subspace(const Lattice& L, const RatMatrix& subspace);

// The lattice generated by v * P for v in L.
Lattice project(const Lattice& L, const RatMatrix& projector);

// det of the Gram matrix of the two canonical bases; well defined up to sign.
Rat discriminant(const Lattice& L1, const Lattice& M1, const BilinearPairing& pairing);

// True iff the dual of M is L and the dual of L is M.
bool is_perfect(const Lattice& L, const Lattice& M, const BilinearPairing& pairing);

// Primes at which the pairing fails to be perfect: the primes dividing a numerator
// or denominator of the elementary divisors of the Gram matrix. Empty iff perfect.
std::vector<Int> obstruction_primes(const Lattice& L, const Lattice& M, const BilinearPairing& pairing);

// Invariants of (amb / sub) for a sublattice of equal rank.
std::vector<Int> quotient_invariants(const Lattice& sub, const Lattice& amb);
Int quotient_order(const Lattice& sub, const Lattice& amb);

// Complementary projections on V and the adjoint projections on W.
struct SplitDecomposition {
    RatMatrix p1, p2;    // on V
    RatMatrix p1t, p2t;  // on W

    // p2 = 1 - p1; the W-side projections are the adjoints with respect to pairing
    // (transposes when no pairing is given). Validates the result.
    static SplitDecomposition from_projector(const RatMatrix& p1, const std::optional<BilinearPairing>& pairing = std::nullopt);
    // Throws DomainError when any projector identity or orthogonality relation fails.
    void validate(const std::optional<BilinearPairing>& pairing = std::nullopt) const;
};

// Rational row space of a projector (its image).
RatMatrix image(const RatMatrix& projector);

}  // namespace ctk
