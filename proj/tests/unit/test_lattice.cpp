#include <gtest/gtest.h>

#include <random>

#include "ctk/lattice.hpp"
#include "oracles.hpp"

using namespace ctk;

namespace {

RatMatrix rm(const std::vector<std::vector<Rat>>& rows, std::size_t cols = 0) { return RatMatrix::from_rows(rows, cols); }

oracle::QMat to_qmat(const RatMatrix& m) {
    oracle::QMat out;
    for (std::size_t i = 0; i < m.rows(); ++i) out.push_back(m.row_vector(i));
    return out;
}

RatMatrix from_dense(const oracle::Dense& d) {
    std::vector<std::vector<Rat>> rows;
    for (const auto& r : d) {
        std::vector<Rat> row;
        for (long x : r) row.emplace_back(x);
        rows.push_back(row);
    }
    return RatMatrix::from_rows(rows);
}

const Rat half(1, 2);

// Every vector of a pairs integrally with every vector of b.
bool pairs_integrally(const RatMatrix& a, const RatMatrix& g, const RatMatrix& b) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.rows(); ++j) {
            Rat s = 0;
            for (std::size_t k = 0; k < a.cols(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l) s += a(i, k) * g(k, l) * b(j, l);
            if (s.get_den() != 1) return false;
        }
    return true;
}

oracle::Dense random_nonsingular(std::mt19937_64& rng, std::size_t n, long lo, long hi) {
    for (;;) {
        auto d = oracle::random_dense(rng, n, n, lo, hi);
        if (oracle::det_bareiss(d) != 0) return d;
    }
}

}  // namespace

TEST(Lattice, CanonicalEquality) {
    auto a = Lattice::from_generators(rm({{1, 1}, {1, -1}}));
    auto b = Lattice::from_generators(rm({{2, 0}, {1, -1}, {0, 2}}));
    EXPECT_EQ(a, b);
    auto c = Lattice::from_basis(rm({{half, 0}, {0, 1}}));
    EXPECT_EQ(c.denominator(), 2);
    EXPECT_TRUE(c.contains(std::vector<Rat>{half, 3}));
    EXPECT_FALSE(c.contains(std::vector<Rat>{Rat(1, 3), 0}));
    EXPECT_THROW(Lattice::from_basis(rm({{1, 2}, {2, 4}})), DomainError);
    EXPECT_EQ(Lattice::zero(3).rank(), 0u);
    EXPECT_TRUE(Lattice::standard(2).contains(a));
    EXPECT_FALSE(a.contains(Lattice::standard(2)));
}

TEST(Lattice, DualExamples) {
    auto std2 = BilinearPairing::standard(2);
    EXPECT_EQ(dual_lattice(Lattice::standard(2), std2), Lattice::standard(2));
    EXPECT_EQ(dual_lattice(Lattice::standard(2).scaled(2), std2), Lattice::standard(2).scaled(half));

    auto M = Lattice::from_basis(rm({{1, 1}, {1, -1}}));
    auto D = dual_lattice(M, std2);
    auto expected = rm({{1, 0}, {half, half}});
    EXPECT_TRUE(oracle::same_lattice(to_qmat(D.basis()), to_qmat(expected)));
    EXPECT_TRUE(pairs_integrally(D.basis(), std2.gram, M.basis()));
    auto cc = oracle::enumerate_cosets(to_qmat(Lattice::standard(2).basis()), to_qmat(D.basis()));
    ASSERT_TRUE(cc);
    EXPECT_EQ(cc->order, 2u);  // [M* : Z^2] = [Z^2 : M] = 2
}

TEST(Lattice, DualOfPartialRank) {
    // Inside span(1,1) the dual of Z(1,1) under the dot product is Z(1/2,1/2).
    auto M = Lattice::from_basis(rm({{1, 1}}));
    auto D = dual_lattice(M, BilinearPairing::standard(2));
    EXPECT_EQ(D, Lattice::from_basis(rm({{half, half}})));
    // A target subspace orthogonal to M is degenerate.
    EXPECT_THROW(dual_lattice(M, BilinearPairing::standard(2), rm({{1, -1}})), DomainError);
}

TEST(Lattice, DegeneratePairingRejected) {
    BilinearPairing g{rm({{1, 1}, {1, 1}})};
    EXPECT_THROW(dual_lattice(Lattice::standard(2), g), DomainError);
    EXPECT_THROW(discriminant(Lattice::standard(2), Lattice::standard(2), g), DomainError);
}

TEST(Lattice, DoubleDualityRandom) {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 60; ++t) {
        std::size_t n = 1 + rng() % 6;
        BilinearPairing g{from_dense(random_nonsingular(rng, n, -3, 3))};
        auto M = Lattice::from_basis(from_dense(random_nonsingular(rng, n, -4, 4)));
        auto D = dual_lattice(M, g);
        EXPECT_TRUE(pairs_integrally(D.basis(), g.gram, M.basis()));
        // The Gram matrix of a lattice against its dual is unimodular.
        EXPECT_EQ(abs(discriminant(D, M, g).get_num()), 1);
        EXPECT_EQ(dual_lattice_left(D, g), M);
        EXPECT_TRUE(is_perfect(D, M, g));
    }
}

TEST(Lattice, IntersectExamples) {
    auto Z2 = Lattice::standard(2);
    EXPECT_EQ(intersect_with_subspace(Z2, rm({{1, 1}})), Lattice::from_basis(rm({{1, 1}})));
    EXPECT_EQ(intersect_with_subspace(Z2, rm({{1, half}})), Lattice::from_basis(rm({{2, 1}})));
    EXPECT_EQ(intersect_with_subspace(Z2, RatMatrix::identity(2)), Z2);
    auto L = Lattice::from_basis(rm({{2, 0}, {1, 3}}));
    auto I = intersect_with_subspace(L, rm({{1, 3}}));
    EXPECT_TRUE(oracle::in_lattice(to_qmat(I.basis()), {1, 3}));
    EXPECT_EQ(I.rank(), 1u);
    EXPECT_EQ(intersect_with_subspace(L, rm({}, 2)).rank(), 0u);
}

TEST(Lattice, ProjectExamples) {
    auto Z2 = Lattice::standard(2);
    auto P = rm({{half, half}, {half, half}});  // onto span(1,1) along span(1,-1)
    auto im = project(Z2, P);
    EXPECT_EQ(im, Lattice::from_basis(rm({{half, half}})));
    auto cc = oracle::enumerate_cosets(to_qmat(rm({{1, 1}})), to_qmat(im.basis()));
    ASSERT_TRUE(cc);
    EXPECT_EQ(cc->order, 2u);
    EXPECT_EQ(project(Z2, RatMatrix::identity(2)), Z2);
    auto diag = Lattice::from_basis(rm({{1, 1}}));
    EXPECT_EQ(project(diag, P), diag);
}

TEST(Lattice, DiscriminantExamples) {
    auto std2 = BilinearPairing::standard(2);
    auto diag = Lattice::from_basis(rm({{1, 1}}));
    EXPECT_EQ(abs(discriminant(diag, diag, std2).get_num()), 2);
    EXPECT_EQ(abs(discriminant(Lattice::standard(2), Lattice::standard(2), std2).get_num()), 1);
    auto three = Lattice::from_basis(rm({{3}}));
    EXPECT_EQ(abs(discriminant(three, Lattice::standard(1), BilinearPairing::standard(1)).get_num()), 3);
    EXPECT_THROW(discriminant(diag, Lattice::standard(2), std2), DomainError);
}

TEST(Lattice, PerfectnessAndObstructions) {
    auto std2 = BilinearPairing::standard(2);
    auto Z2 = Lattice::standard(2);
    EXPECT_TRUE(is_perfect(Z2, Z2, std2));
    EXPECT_FALSE(is_perfect(Z2, Z2.scaled(2), std2));
    EXPECT_EQ(obstruction_primes(Z2, Z2.scaled(2), std2), (std::vector<Int>{2}));
    EXPECT_TRUE(obstruction_primes(Z2, Z2, std2).empty());
    auto M = Lattice::from_basis(rm({{1, 1}, {1, -1}}));
    EXPECT_TRUE(is_perfect(dual_lattice(M, std2), M, std2));
    // Denominators count as well: (1/3) Z against Z.
    auto third = Lattice::from_basis(rm({{Rat(1, 3)}}));
    EXPECT_EQ(obstruction_primes(third, Lattice::standard(1), BilinearPairing::standard(1)), (std::vector<Int>{3}));
}

TEST(Lattice, DiscriminantIsIndexInDual) {
    std::mt19937_64 rng(5);
    for (int t = 0; t < 40; ++t) {
        std::size_t n = 1 + rng() % 4;
        BilinearPairing g{from_dense(random_nonsingular(rng, n, -2, 2))};
        auto M1 = Lattice::from_basis(from_dense(random_nonsingular(rng, n, -3, 3)));
        auto Mstar = dual_lattice(M1, g);
        // A random sublattice of M1*.
        auto L1 = Lattice::from_basis(from_dense(random_nonsingular(rng, n, -3, 3)) * Mstar.basis());
        ASSERT_TRUE(Mstar.contains(L1));
        Int prod = 1;
        for (const auto& d : quotient_invariants(L1, Mstar)) prod *= d;
        EXPECT_EQ(abs(discriminant(L1, M1, g).get_num()), prod);
        EXPECT_EQ(discriminant(L1, M1, g).get_den(), 1);
        if (prod <= 60) {
            auto cc = oracle::enumerate_cosets(to_qmat(L1.basis()), to_qmat(Mstar.basis()));
            ASSERT_TRUE(cc);
            EXPECT_EQ(Int(static_cast<unsigned long>(cc->order)), prod);
        }
    }
}

TEST(Lattice, ProjectionAndIntersectionQuotients) {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 40; ++t) {
        std::size_t n = 2 + rng() % 4;
        std::size_t k = 1 + rng() % (n - 1);
        // P1 = Q^{-1} diag(1..1, 0..0) Q for a random rational change of basis Q.
        RatMatrix Q = from_dense(random_nonsingular(rng, n, -3, 3));
        std::vector<Rat> d(n, 0);
        for (std::size_t i = 0; i < k; ++i) d[i] = 1;
        RatMatrix P1 = inverse(Q) * RatMatrix::diagonal(d) * Q;
        RatMatrix P2 = RatMatrix::identity(n) - P1;
        auto L = Lattice::from_basis(from_dense(random_nonsingular(rng, n, -3, 3)));
        auto L1 = intersect_with_subspace(L, image(P1));
        auto L2 = intersect_with_subspace(L, image(P2));
        auto Lam1 = project(L, P1);
        auto Lam2 = project(L, P2);
        ASSERT_EQ(L1.rank(), k);
        ASSERT_EQ(Lam1.rank(), k);
        EXPECT_TRUE(Lam1.contains(L1));
        EXPECT_TRUE(Lam2.contains(L2));
        EXPECT_TRUE(L.contains(L1));
        EXPECT_EQ(quotient_invariants(L1, Lam1), quotient_invariants(L2, Lam2));
        // Every lattice vector lying in the subspace is in the intersection.
        for (std::size_t i = 0; i < L.rank(); ++i) {
            RatMatrix v(1, n);
            for (std::size_t j = 0; j < n; ++j) v(0, j) = L.basis()(i, j);
            if ((v * P2).is_zero()) EXPECT_TRUE(L1.contains(v.row(0)));
        }
    }
}

TEST(Split, FromProjector) {
    auto P = rm({{half, half}, {half, half}});
    auto s = SplitDecomposition::from_projector(P);
    EXPECT_EQ(s.p2, rm({{half, -half}, {-half, half}}));
    EXPECT_EQ(s.p1t, P);

    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        std::size_t n = 2 + rng() % 4;
        RatMatrix Q = from_dense(random_nonsingular(rng, n, -3, 3));
        std::vector<Rat> d(n, 0);
        d[0] = 1;
        RatMatrix P1 = inverse(Q) * RatMatrix::diagonal(d) * Q;
        BilinearPairing g{from_dense(random_nonsingular(rng, n, -3, 3))};
        auto sp = SplitDecomposition::from_projector(P1, g);
        // <x p1, y> = <x, y p1t> for basis vectors.
        EXPECT_EQ(P1 * g.gram, g.gram * sp.p1t.transpose());
    }

    SplitDecomposition bad{RatMatrix::identity(2), RatMatrix::identity(2), RatMatrix::identity(2), RatMatrix(2, 2)};
    EXPECT_THROW(bad.validate(), DomainError);
    EXPECT_THROW(SplitDecomposition::from_projector(rm({{1, 1}, {0, 1}})), DomainError);
}
