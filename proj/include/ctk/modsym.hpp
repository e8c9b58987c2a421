#pragma once

#include <array>
#include <utility>
#include <vector>

#include "ctk/hecke.hpp"
#include "ctk/linalg.hpp"

namespace ctk::modsym {

// Weight-2 modular symbols for Gamma_0(N), presented by Manin symbols (c:d) in P^1(Z/N)
// modulo the two- and three-term relations.
struct ManinSymbolSpace {
    long level = 1;
    std::vector<std::pair<long, long>> symbols;  // canonical representatives, sorted
    IntMatrix relations;                         // rows: x + x s, x + x t + x t^2
    std::size_t relation_rank = 0;
    std::vector<Int> torsion;  // invariant factors > 1 of the quotient
    std::size_t free_rank = 0;
    IntMatrix to_free;    // #symbols x free_rank: x -> x * to_free
    IntMatrix from_free;  // free_rank x #symbols: a lift of each free generator
    std::vector<std::pair<Int, Int>> cusps;  // p/q in lowest terms, q >= 0, infinity = 1/0
    IntMatrix boundary;   // free_rank x #cusps

    // Index of the symbol equivalent to (c:d); -1 when gcd(c, d, N) != 1.
    long index_of(long c, long d) const;

    std::vector<long> canonical_;  // N*N table behind index_of
};

ManinSymbolSpace build_space(long N);

// Cusp index of p/q (lowest terms) among space.cusps under Gamma_0(N)-equivalence,
// or -1 if not listed.
long cusp_index(const ManinSymbolSpace& space, const Int& p, const Int& q);
bool cusps_equivalent(long N, const std::pair<Int, Int>& a, const std::pair<Int, Int>& b);

// The saturated kernel of the boundary map, rows in free coordinates.
struct CuspidalLattice {
    IntMatrix basis;
    std::size_t rank() const { return basis.rows(); }
};

CuspidalLattice cuspidal_lattice(const ManinSymbolSpace& space);

enum class HeilbronnKind { Cremona, Merel };

// Determinant-l matrices (a, b, c, d) acting on (u:v) by (ua + vc : ub + vd).
std::vector<std::array<long, 4>> heilbronn_matrices(long l, HeilbronnKind kind = HeilbronnKind::Cremona);

// T_l on the free quotient of the whole symbol space.
IntMatrix hecke_operator_free(const ManinSymbolSpace& space, long l, HeilbronnKind kind = HeilbronnKind::Cremona);

// T_l on the cuspidal lattice, in the lattice's basis. Rejects l | N and composite l.
IntMatrix hecke_operator(const ManinSymbolSpace& space, const CuspidalLattice& lattice, long l,
                         HeilbronnKind kind = HeilbronnKind::Cremona);

// The cuspidal lattice as Z^rank with operators T_l labelled (l, 1).
HeckeSystem to_hecke_system(const CuspidalLattice& lattice, const std::vector<std::pair<long, IntMatrix>>& operators);

// build_space, cuspidal_lattice and T_l for each l in primes.
HeckeSystem cuspidal_system(long N, const std::vector<long>& primes);

}  // namespace ctk::modsym
