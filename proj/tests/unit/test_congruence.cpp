#include <gtest/gtest.h>

#include <random>

#include "ctk/congruence.hpp"
#include "oracles.hpp"

using namespace ctk;

namespace {

RatMatrix rm(const std::vector<std::vector<Rat>>& rows) { return RatMatrix::from_rows(rows); }

const Rat half(1, 2);

// Split of Q^2 into span(1,1) and span(1,-1).
SplitDecomposition diagonal_split() { return SplitDecomposition::from_projector(rm({{half, half}, {half, half}})); }

HeckeSystem system_of(std::vector<IntMatrix> mats) {
    std::vector<HeckeOperator> ops;
    for (std::size_t i = 0; i < mats.size(); ++i)
        ops.push_back({OperatorLabel::named("T" + std::to_string(i)), mats[i], std::nullopt});
    return HeckeSystem(Lattice::standard(mats.front().rows()), ops);
}

Eigensystem rational_chi(const HeckeSystem& H, std::vector<Rat> v) {
    Eigensystem e;
    e.labels = H.labels();
    e.values = std::move(v);
    return e;
}

}  // namespace

TEST(CongruenceModule, Examples) {
    auto Z2 = Lattice::standard(2);
    auto C = congruence_module(Z2, diagonal_split());
    EXPECT_EQ(C.divisors, (std::vector<Int>{2}));
    EXPECT_EQ(C.order, 2);
    EXPECT_EQ(C.support, (std::vector<Int>{2}));

    // Split-adapted lattice.
    auto Lsplit = Lattice::from_basis(rm({{1, 1}, {1, -1}}));
    EXPECT_TRUE(congruence_module(Lsplit, diagonal_split()).trivial());

    // V1 = span(2,1), V2 = span(1,1): the two generators form a Z-basis of Z^2.
    RatMatrix B = rm({{2, 1}, {1, 1}});
    RatMatrix P = inverse(B) * RatMatrix::diagonal({1, 0}) * B;
    auto C2 = congruence_module(Z2, SplitDecomposition::from_projector(P));
    EXPECT_TRUE(C2.trivial());
    EXPECT_EQ(C2.order, 1);

    SplitDecomposition bad{RatMatrix::identity(2), RatMatrix::identity(2), RatMatrix::identity(2), RatMatrix(2, 2)};
    EXPECT_THROW(congruence_module(Z2, bad), DomainError);
}

TEST(CongruenceModule, CosetOracle) {
    auto parts = congruence_module_parts(Lattice::standard(2), diagonal_split());
    EXPECT_TRUE(parts.isomorphic());
    oracle::QMat sub{{1, 1}}, amb{{half, half}};
    auto cc = oracle::enumerate_cosets(sub, amb);
    ASSERT_TRUE(cc);
    EXPECT_EQ(cc->order, 2u);
    EXPECT_EQ(parts.Lambda1, Lattice::from_basis(rm({{half, half}})));
    EXPECT_EQ(parts.L1, Lattice::from_basis(rm({{1, 1}})));
}

TEST(DiscEquivalence, Examples) {
    auto Z2 = Lattice::standard(2);
    auto g = BilinearPairing::standard(2);
    auto s = diagonal_split();
    auto at2 = disc_equivalence(Z2, Z2, g, s, 2);
    EXPECT_FALSE(at2.excluded);
    EXPECT_TRUE(at2.valuation_positive);
    EXPECT_TRUE(at2.module_nontrivial_at_p);
    EXPECT_EQ(abs(at2.discriminant->get_num()), 2);
    auto at3 = disc_equivalence(Z2, Z2, g, s, 3);
    EXPECT_FALSE(at3.valuation_positive);
    EXPECT_FALSE(at3.module_nontrivial_at_p);

    auto Lsplit = Lattice::from_basis(rm({{1, 1}, {1, -1}}));
    auto dual = dual_lattice(Lsplit, g);
    for (long p : {2L, 3L, 5L}) {
        auto r = disc_equivalence(dual, Lsplit, g, s, p);
        EXPECT_FALSE(r.excluded);
        EXPECT_FALSE(r.valuation_positive);
        EXPECT_FALSE(r.module_nontrivial_at_p);
    }

    // Imperfect pairing: excluded at the obstruction prime only.
    auto imp = disc_equivalence(Z2, Z2.scaled(3), g, s, 3);
    EXPECT_TRUE(imp.excluded);
    EXPECT_EQ(imp.obstruction_primes, (std::vector<Int>{3}));
    EXPECT_FALSE(disc_equivalence(Z2, Z2.scaled(3), g, s, 2).excluded);
}

TEST(HeckeCongruence, Examples) {
    auto swap = system_of({IntMatrix::from_rows({{0, 1}, {1, 0}})});
    auto comps = isotypic_decomposition(swap);
    auto pp = projector_pair(comps, {0});
    auto Q = hecke_congruence_module(swap, pp.e1, pp.e2);
    EXPECT_EQ(Q.divisors, (std::vector<Int>{2}));

    auto id = system_of({IntMatrix::identity(2)});
    EXPECT_TRUE(hecke_congruence_module(id, RatMatrix::identity(2), RatMatrix(2, 2)).trivial());

    auto d13 = system_of({IntMatrix::diagonal({1, 3})});
    auto c13 = isotypic_decomposition(d13);
    auto p13 = projector_pair(c13, {0});
    EXPECT_EQ(hecke_congruence_module(d13, p13.e1, p13.e2).divisors, (std::vector<Int>{2}));

    // diag(1,0) is not in the algebra generated by the identity.
    EXPECT_THROW(hecke_congruence_module(id, RatMatrix::diagonal({1, 0}), RatMatrix::diagonal({0, 1})), DomainError);
}

TEST(HeckeCongruence, AlgebraLattice) {
    // Z[T] for T = [[0,2],[1,0]] has basis I, T.
    auto H = system_of({IntMatrix::from_rows({{0, 2}, {1, 0}})});
    auto A = hecke_algebra_lattice(H);
    EXPECT_EQ(A.rank(), 2u);
    EXPECT_TRUE(A.contains(std::vector<Rat>{2, 0, 0, 2}));  // T^2 = 2I
    EXPECT_TRUE(A.contains(std::vector<Rat>{0, 2, 1, 0}));
    EXPECT_FALSE(A.contains(std::vector<Rat>{0, 1, half, 0}));
}

TEST(StrongCongruence, Examples) {
    auto swap = system_of({IntMatrix::from_rows({{0, 1}, {1, 0}})});
    auto pp = projector_pair(isotypic_decomposition(swap), {0});
    EXPECT_TRUE(strong_congruence_check(swap, pp.e1, pp.e2));
    auto C = congruence_module(Lattice::standard(2), SplitDecomposition::from_projector(pp.e1));
    EXPECT_EQ(C.order, 2);

    // A lattice already split by the projectors: C trivial, the check is vacuous.
    auto d = system_of({IntMatrix::diagonal({1, 2})});
    auto pd = projector_pair(isotypic_decomposition(d), {0});
    EXPECT_TRUE(congruence_module(Lattice::standard(2), SplitDecomposition::from_projector(pd.e1)).trivial());
    EXPECT_TRUE(strong_congruence_check(d, pd.e1, pd.e2));
}

TEST(StrongCongruence, RandomSystemsWithGlue) {
    // Two scalar blocks a, a + p r glued along (e0 + e1)/p, then conjugated.
    std::mt19937_64 rng(31);
    for (int t = 0; t < 30; ++t) {
        long p = std::vector<long>{2, 3, 5, 7}[rng() % 4];
        long a = static_cast<long>(rng() % 7) - 3, r = 1 + static_cast<long>(rng() % 3);
        RatMatrix glue = rm({{Rat(1, p), Rat(1, p)}, {0, 1}});
        RatMatrix D = RatMatrix::diagonal({a, a + p * r});
        auto T = to_integer(glue * D * inverse(glue));
        ASSERT_TRUE(T);
        auto H = system_of({*T});
        auto comps = isotypic_decomposition(H);
        ASSERT_EQ(comps.size(), 2u);
        auto pp = projector_pair(comps, {0});
        auto C = congruence_module(Lattice::standard(2), SplitDecomposition::from_projector(pp.e1));
        auto Q = hecke_congruence_module(H, pp.e1, pp.e2);
        EXPECT_TRUE(C.supported_at(p));
        EXPECT_TRUE(Q.supported_at(p));
        EXPECT_TRUE(strong_congruence_check(H, pp.e1, pp.e2));
    }
}

TEST(DeligneSerre, ToyInstance) {
    auto swap = system_of({IntMatrix::from_rows({{0, 1}, {1, 0}})});
    auto comps = isotypic_decomposition(swap);
    std::size_t plus = (*comps[0].rational_values())[0] == 1 ? 0 : 1;
    auto pp = projector_pair(comps, {plus});
    auto lifts = deligne_serre_lift(swap, pp.e1, pp.e2, 2, rational_chi(swap, {1}));
    ASSERT_EQ(lifts.size(), 1u);
    ASSERT_TRUE(lifts[0].values);
    EXPECT_EQ((*lifts[0].values)[0], -1);
    EXPECT_EQ(lifts[0].residue.value_strings(), (std::vector<std::string>{"1"}));
    EXPECT_THROW(deligne_serre_lift(swap, pp.e1, pp.e2, 3, rational_chi(swap, {1})), NoCongruentEigensystem);
    // chi1 must live on the first block.
    EXPECT_THROW(deligne_serre_lift(swap, pp.e1, pp.e2, 3, rational_chi(swap, {-1})), DomainError);
}

TEST(DeligneSerre, NoCongruence) {
    auto H = system_of({IntMatrix::diagonal({1, 5}), IntMatrix::diagonal({2, 7})});
    RatMatrix e1 = RatMatrix::diagonal({1, 0}), e2 = RatMatrix::diagonal({0, 1});
    for (long p : {2L, 3L, 5L})
        EXPECT_THROW(deligne_serre_lift(H, e1, e2, p, rational_chi(H, {1, 2})), NoCongruentEigensystem) << p;
    // Brute force: no prime divides both differences 4 and 5.
    EXPECT_TRUE(hecke_congruence_module(H, e1, e2).trivial());
}

TEST(DeligneSerre, ExtensionFieldEigensystems) {
    // Block 1 carries x^2 - 2, block 2 carries x^2 + 5: congruent mod 7.
    IntMatrix C1 = IntMatrix::from_rows({{0, 1}, {2, 0}});
    IntMatrix C2 = IntMatrix::from_rows({{0, 1}, {-5, 0}});
    IntMatrix T(4, 4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            T(i, j) = C1(i, j);
            T(i + 2, j + 2) = C2(i, j);
        }
    auto H = system_of({T});
    auto comps = isotypic_decomposition(H);
    ASSERT_EQ(comps.size(), 2u);
    auto pp = projector_pair(comps, {0});
    for (long p : {3L, 5L}) {  // x^2 - 2 is irreducible mod 3 and mod 5, so F_{p^2} is needed
        auto chis = mod_p_eigensystems(H, p, pp.e1);
        ASSERT_FALSE(chis.empty());
        EXPECT_EQ(chis[0].field->degree(), 2u);
        // x^2 + 5 differs from x^2 - 2 by 7: congruent mod 7 only.
        EXPECT_THROW(deligne_serre_lift(H, pp.e1, pp.e2, p, chis[0]), NoCongruentEigensystem);
    }
    auto chis7 = mod_p_eigensystems(H, 7, pp.e1);
    ASSERT_EQ(chis7.size(), 2u);  // x^2 - 2 = (x - 3)(x - 4) mod 7
    for (const auto& chi : chis7) {
        auto lifts = deligne_serre_lift(H, pp.e1, pp.e2, 7, chi);
        ASSERT_EQ(lifts.size(), 1u);
        EXPECT_EQ(lifts[0].residue.residues, chi.residues);
        EXPECT_FALSE(lifts[0].values);
    }
}
