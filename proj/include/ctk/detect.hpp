#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctk/congruence.hpp"

namespace ctk {

enum class OrbitGrouping {
    None,    // any two distinct components
    Galois,  // also look for conjugates inside one component that collide mod p
};

struct ComponentSummary {
    std::size_t dim = 0;
    std::size_t orbit_size = 1;
    bool semisimple = true;
    std::vector<std::string> factors;            // per generator, "f^e"
    std::optional<std::vector<Rat>> values;      // when all eigenvalues are rational
    std::vector<std::vector<std::string>> residues;  // distinct mod-p eigensystems
};

struct CongruentPair {
    std::size_t a = 0, b = 0;
    std::vector<std::vector<std::string>> shared;  // residue eigensystems seen on both
    CongruenceModule lattice_module;               // C(L; component a, rest)
    CongruenceModule hecke_module;                 // Q(H; component a, rest)
    bool strong = false;                           // supp C inside supp Q
};

// Two conjugate eigensystems of one component that agree modulo a prime above p.
struct OrbitCollision {
    std::size_t component = 0;
    std::size_t orbit_size = 0;
    std::size_t distinct_residues = 0;
};

struct DetectionReport {
    Int prime;
    OrbitGrouping grouping = OrbitGrouping::None;
    unsigned degree = 1;  // residues live in F_{p^degree}
    std::string verdict;  // "congruent", "not-congruent" or "excluded"
    std::vector<Int> obstruction_primes;
    std::vector<ComponentSummary> components;
    std::vector<CongruentPair> pairs;
    std::vector<OrbitCollision> collisions;
};

struct PairingContext {
    Lattice dual;
    BilinearPairing pairing;
};

// Splits H into isotypic components and compares their reductions mod p. With a
// pairing, p is excluded when the pairing is not perfect at p.
DetectionReport detect_congruences(const HeckeSystem& H, std::int64_t p, OrbitGrouping grouping = OrbitGrouping::None,
                                   std::optional<unsigned> ext_degree = std::nullopt,
                                   const std::optional<PairingContext>& pairing = std::nullopt);

}  // namespace ctk
