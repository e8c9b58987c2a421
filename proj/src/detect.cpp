#include "ctk/detect.hpp"

#include <algorithm>
#include <numeric>

namespace ctk {

DetectionReport detect_congruences(const HeckeSystem& H, std::int64_t p, OrbitGrouping grouping,
                                   std::optional<unsigned> ext_degree, const std::optional<PairingContext>& pairing) {
    if (!is_prime(Int(p))) throw DomainError(std::to_string(p) + " is not prime");
    if (!check_commuting(H)) throw DomainError("operators do not commute");
    DetectionReport rep;
    rep.prime = p;
    rep.grouping = grouping;

    if (pairing) {
        rep.obstruction_primes = obstruction_primes(H.lattice(), pairing->dual, pairing->pairing);
        if (std::binary_search(rep.obstruction_primes.begin(), rep.obstruction_primes.end(), Int(p))) {
            rep.verdict = "excluded";
            return rep;
        }
    }

    auto comps = isotypic_decomposition(H);
    unsigned m = 1;
    if (ext_degree) {
        if (*ext_degree == 0) throw DomainError("extension degree must be positive");
        m = *ext_degree;
    } else {
        for (const auto& c : comps) m = std::lcm(m, splitting_degree(H, p, c.projector));
    }
    rep.degree = m;

    // Distinct residue eigensystems per component, in order of appearance.
    std::vector<std::vector<std::vector<GaloisField::Elem>>> residues(comps.size());
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const auto& c = comps[i];
        ComponentSummary s;
        s.dim = c.dim();
        s.orbit_size = c.orbit_size;
        s.semisimple = c.semisimple;
        for (std::size_t g = 0; g < c.factors.size(); ++g) {
            std::string f = "(" + to_string(c.factors[g]) + ")";
            if (c.exponents[g] > 1) f += "^" + std::to_string(c.exponents[g]);
            s.factors.push_back(f);
        }
        s.values = c.rational_values();
        for (const auto& e : mod_p_eigensystems(H, p, c.projector, m))
            if (std::find(residues[i].begin(), residues[i].end(), e.residues) == residues[i].end()) {
                residues[i].push_back(e.residues);
                s.residues.push_back(e.value_strings());
            }
        rep.components.push_back(std::move(s));
    }

    const std::size_t r = H.dim();
    for (std::size_t a = 0; a < comps.size(); ++a)
        for (std::size_t b = a + 1; b < comps.size(); ++b) {
            std::vector<std::vector<std::string>> shared;
            for (std::size_t k = 0; k < residues[a].size(); ++k)
                if (std::find(residues[b].begin(), residues[b].end(), residues[a][k]) != residues[b].end())
                    shared.push_back(rep.components[a].residues[k]);
            if (shared.empty()) continue;
            CongruentPair pr;
            pr.a = a;
            pr.b = b;
            pr.shared = std::move(shared);
            const RatMatrix& e1 = comps[a].projector;
            RatMatrix e2 = RatMatrix::identity(r) - e1;
            pr.lattice_module = congruence_module(Lattice::standard(r), SplitDecomposition::from_projector(e1));
            pr.hecke_module = hecke_congruence_module(H, e1, e2);
            pr.strong = std::all_of(pr.lattice_module.support.begin(), pr.lattice_module.support.end(),
                                    [&](const Int& q) { return pr.hecke_module.supported_at(q); });
            rep.pairs.push_back(std::move(pr));
        }

    if (grouping == OrbitGrouping::Galois)
        for (std::size_t i = 0; i < comps.size(); ++i)
            if (comps[i].orbit_size > 1 && residues[i].size() < comps[i].orbit_size)
                rep.collisions.push_back({i, comps[i].orbit_size, residues[i].size()});

    rep.verdict = rep.pairs.empty() && rep.collisions.empty() ? "not-congruent" : "congruent";
    return rep;
}

}  // namespace ctk
