#include "ctk/congruence.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace ctk {

CongruenceModule CongruenceModule::from_divisors(std::vector<Int> divisors) {
    CongruenceModule m;
    for (auto& d : divisors)
        if (abs(d) > 1) m.divisors.push_back(abs(d));
    for (const auto& d : m.divisors) {
        m.order *= d;
        for (const auto& p : prime_divisors(d)) m.support.push_back(p);
    }
    std::sort(m.support.begin(), m.support.end());
    m.support.erase(std::unique(m.support.begin(), m.support.end()), m.support.end());
    return m;
}

bool CongruenceModule::supported_at(const Int& p) const { return std::binary_search(support.begin(), support.end(), p); }

namespace {

void check_split(const SplitDecomposition& s, std::size_t n) {
    const RatMatrix I = RatMatrix::identity(n);
    if (!s.p1.is_square() || s.p1.rows() != n || s.p2.rows() != n || s.p2.cols() != n)
        throw DomainError("split projectors do not act on the lattice's ambient space");
    if (!(s.p1 + s.p2 == I)) throw DomainError("split projectors do not sum to the identity");
    if (!(s.p1 * s.p1 == s.p1) || !(s.p2 * s.p2 == s.p2) || !(s.p1 * s.p2).is_zero())
        throw DomainError("split projectors are not complementary idempotents");
}

}  // namespace

CongruenceModuleParts congruence_module_parts(const Lattice& L, const SplitDecomposition& split) {
    check_split(split, L.ambient_dim());
    CongruenceModuleParts out;
    out.L1 = intersect_with_subspace(L, image(split.p1));
    out.L2 = intersect_with_subspace(L, image(split.p2));
    out.Lambda1 = project(L, split.p1);
    out.Lambda2 = project(L, split.p2);
    out.sum_over_L = quotient_invariants(L, out.Lambda1 + out.Lambda2);
    out.lambda1_over_L1 = quotient_invariants(out.L1, out.Lambda1);
    out.lambda2_over_L2 = quotient_invariants(out.L2, out.Lambda2);
    out.module = CongruenceModule::from_divisors(out.sum_over_L);
    return out;
}

CongruenceModule congruence_module(const Lattice& L, const SplitDecomposition& split) {
    auto parts = congruence_module_parts(L, split);
    if (!parts.isomorphic()) throw std::logic_error("congruence module quotients disagree");
    return parts.module;
}

DiscEquivalence disc_equivalence(const Lattice& L, const Lattice& M, const BilinearPairing& pairing,
                                 const SplitDecomposition& split, const Int& p) {
    if (!is_prime(p)) throw DomainError("disc equivalence: " + to_string(p) + " is not prime");
    if (L.ambient_dim() != pairing.left_dim() || M.ambient_dim() != pairing.right_dim())
        throw DomainError("disc equivalence: lattices do not match the pairing");
    split.validate(pairing);
    DiscEquivalence out;
    out.prime = p;
    out.obstruction_primes = obstruction_primes(L, M, pairing);
    if (std::binary_search(out.obstruction_primes.begin(), out.obstruction_primes.end(), p)) {
        out.excluded = true;
        return out;
    }
    out.module = congruence_module(L, split);
    auto L1 = intersect_with_subspace(L, image(split.p1));
    auto M1 = intersect_with_subspace(M, image(split.p1t));
    out.discriminant = discriminant(L1, M1, pairing);
    out.valuation_positive = valuation(*out.discriminant, p) > Valuation::finite(0);
    out.module_nontrivial_at_p = out.module.supported_at(p);
    return out;
}

Lattice hecke_algebra_lattice(const HeckeSystem& H) {
    const std::size_t r = H.dim();
    if (r == 0) return Lattice::zero(0);
    auto flat = [r](const IntMatrix& m) {
        IntMatrix row(1, r * r);
        std::copy(m.data().begin(), m.data().end(), row.row(0).begin());
        return row;
    };
    IntMatrix cur = hnf_basis(flat(IntMatrix::identity(r)));
    for (;;) {
        IntMatrix gens = cur;
        for (std::size_t i = 0; i < cur.rows(); ++i) {
            IntMatrix b(r, r);
            for (std::size_t a = 0; a < r; ++a)
                for (std::size_t c = 0; c < r; ++c) b(a, c) = cur(i, a * r + c);
            for (const auto& op : H.operators()) gens = vstack(gens, flat(b * op.matrix));
        }
        IntMatrix next = hnf_basis(gens);
        if (next == cur) break;
        cur = std::move(next);
    }
    return Lattice::from_basis(to_rational(cur));
}

CongruenceModule hecke_congruence_module(const HeckeSystem& H, const RatMatrix& e1, const RatMatrix& e2) {
    if (!check_commuting(H)) throw DomainError("operators do not commute");
    const std::size_t r = H.dim();
    if (e1.rows() != r || e1.cols() != r || e2.rows() != r || e2.cols() != r)
        throw DomainError("projectors have the wrong size");
    if (!(e1 + e2 == RatMatrix::identity(r))) throw DomainError("projectors do not sum to the identity");
    auto A = hecke_algebra_lattice(H);
    const RatMatrix& basis = A.basis();
    auto flat = [r](const RatMatrix& m) {
        RatMatrix row(1, r * r);
        std::copy(m.data().begin(), m.data().end(), row.row(0).begin());
        return row;
    };
    auto unflat = [r](std::span<const Rat> v) {
        RatMatrix m(r, r);
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t c = 0; c < r; ++c) m(a, c) = v[a * r + c];
        return m;
    };
    for (const RatMatrix* e : {&e1, &e2})
        if (!solve_left(basis, flat(*e))) throw DomainError("projector is not in the rational Hecke algebra");

    auto part = [&](const RatMatrix& e) {
        RatMatrix span(0, r * r);
        for (std::size_t i = 0; i < basis.rows(); ++i) span = vstack(span, flat(unflat(basis.row(i)) * e));
        return intersect_with_subspace(A, span);
    };
    return CongruenceModule::from_divisors(quotient_invariants(part(e1) + part(e2), A));
}

bool strong_congruence_check(const Lattice& L, const SplitDecomposition& split, const HeckeSystem& H,
                             const RatMatrix& e1, const RatMatrix& e2) {
    auto C = congruence_module(L, split);
    auto Q = hecke_congruence_module(H, e1, e2);
    return std::all_of(C.support.begin(), C.support.end(), [&](const Int& p) { return Q.supported_at(p); });
}

bool strong_congruence_check(const HeckeSystem& H, const RatMatrix& e1, const RatMatrix& e2) {
    // In lattice coordinates the lattice is Z^r and the split is e1, e2 themselves.
    SplitDecomposition split{e1, e2, e1.transpose(), e2.transpose()};
    return strong_congruence_check(Lattice::standard(H.dim()), split, H, e1, e2);
}

std::vector<Lift> deligne_serre_lift(const HeckeSystem& H, const RatMatrix& e1, const RatMatrix& e2, std::int64_t p,
                                     const Eigensystem& chi1, std::optional<unsigned> ext_degree) {
    if (chi1.labels != H.labels()) throw DomainError("eigensystem labels do not match the operators");
    if (chi1.field && chi1.field->characteristic() != p)
        throw DomainError("eigensystem lives in characteristic " + std::to_string(chi1.field->characteristic()));
    const std::size_t r = H.dim();
    if (!(e1 + e2 == RatMatrix::identity(r))) throw DomainError("projectors do not sum to the identity");

    unsigned m = ext_degree ? *ext_degree : std::lcm(splitting_degree(H, p, e1), splitting_degree(H, p, e2));
    if (chi1.field) m = std::lcm(m, chi1.field->degree());
    GaloisField F(p, m);
    auto targets = residues_in(chi1, F);

    bool occurs = false;
    for (const auto& e : mod_p_eigensystems(H, p, e1, m))
        occurs = occurs || std::find(targets.begin(), targets.end(), e.residues) != targets.end();
    if (!occurs) throw DomainError("chi1 is not an eigensystem of the first block modulo " + std::to_string(p));

    auto comps = isotypic_decomposition(H);
    std::vector<Lift> out;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto& P = comps[i].projector;
        if (!(P * e2 == P)) continue;
        for (auto& e : mod_p_eigensystems(H, p, P, m))
            if (std::find(targets.begin(), targets.end(), e.residues) != targets.end())
                out.push_back({i, std::move(e), comps[i].rational_values()});
    }
    if (out.empty())
        throw NoCongruentEigensystem("no eigensystem on the second block is congruent to chi1 modulo " + std::to_string(p));
    std::sort(out.begin(), out.end(), [](const Lift& a, const Lift& b) {
        return std::tie(a.residue.residues, a.component) < std::tie(b.residue.residues, b.component);
    });
    return out;
}

}  // namespace ctk
