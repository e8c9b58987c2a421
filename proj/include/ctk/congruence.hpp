#pragma once

#include <optional>
#include <vector>

#include "ctk/hecke.hpp"
#include "ctk/lattice.hpp"

namespace ctk {

// A finite abelian group presented by its invariant factors d_1 | d_2 | ... (all > 1).
struct CongruenceModule {
    std::vector<Int> divisors;
    Int order = 1;
    std::vector<Int> support;

    static CongruenceModule from_divisors(std::vector<Int> divisors);
    bool trivial() const { return divisors.empty(); }
    bool supported_at(const Int& p) const;
};

// The three quotients that present C(L; V1, V2), with the lattices they come from.
struct CongruenceModuleParts {
    Lattice L1, L2;          // L meet V_i
    Lattice Lambda1, Lambda2;  // images of L under the projections
    std::vector<Int> sum_over_L;       // (Lambda1 + Lambda2) / L
    std::vector<Int> lambda1_over_L1;  // Lambda1 / L1
    std::vector<Int> lambda2_over_L2;  // Lambda2 / L2
    CongruenceModule module;
    bool isomorphic() const { return sum_over_L == lambda1_over_L1 && sum_over_L == lambda2_over_L2; }
};

// Computes all three quotients. Rejects projectors that are not complementary idempotents.
CongruenceModuleParts congruence_module_parts(const Lattice& L, const SplitDecomposition& split);
// As above; throws std::logic_error if the three quotients disagree (an internal bug).
CongruenceModule congruence_module(const Lattice& L, const SplitDecomposition& split);

struct DiscEquivalence {
    Int prime;
    bool excluded = false;                // p divides an obstruction to perfectness
    std::vector<Int> obstruction_primes;  // empty iff the pairing is perfect
    std::optional<Rat> discriminant;      // disc(L1 x M1)
    bool valuation_positive = false;
    bool module_nontrivial_at_p = false;
    CongruenceModule module;
    bool agree() const { return excluded || valuation_positive == module_nontrivial_at_p; }
};

// L in V, M in W, pairing V x W -> Q, split of V with its adjoint split of W.
// L1 = L meet V1 and M1 = M meet W1; compares v_p(disc(L1 x M1)) > 0 with p | #C(L; V1, V2).
DiscEquivalence disc_equivalence(const Lattice& L, const Lattice& M, const BilinearPairing& pairing,
                                 const SplitDecomposition& split, const Int& p);

// The Z-algebra generated by the operators inside End(Z^r), as a lattice of flattened
// r x r matrices (row-major).
Lattice hecke_algebra_lattice(const HeckeSystem& H);

// Q(H; e1, e2) = H / (H meet e1 H_Q + H meet e2 H_Q). e1, e2 are in lattice coordinates.
CongruenceModule hecke_congruence_module(const HeckeSystem& H, const RatMatrix& e1, const RatMatrix& e2);

// supp C(L; V1, V2) inside supp Q(H; e1, e2), which gives C != 0 => Q != 0 at every prime.
// L, split in ambient coordinates; e1, e2 in lattice coordinates.
bool strong_congruence_check(const Lattice& L, const SplitDecomposition& split, const HeckeSystem& H,
                             const RatMatrix& e1, const RatMatrix& e2);
// The same with L the system's own lattice and the split induced by e1, e2.
bool strong_congruence_check(const HeckeSystem& H, const RatMatrix& e1, const RatMatrix& e2);

struct Lift {
    std::size_t component = 0;  // index into isotypic_decomposition(H)
    Eigensystem residue;        // the congruent eigensystem mod p on that component
    std::optional<std::vector<Rat>> values;  // characteristic-zero values when rational
};

// Eigensystems on im e2 congruent to chi1 modulo a prime above p, sorted by residues.
// chi1 may be rational or a mod-p eigensystem; it must occur on im e1.
// Throws NoCongruentEigensystem when there is none.
std::vector<Lift> deligne_serre_lift(const HeckeSystem& H, const RatMatrix& e1, const RatMatrix& e2, std::int64_t p,
                                     const Eigensystem& chi1, std::optional<unsigned> ext_degree = std::nullopt);

}  // namespace ctk
