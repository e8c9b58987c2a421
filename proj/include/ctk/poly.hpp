#pragma once

#include <string>
#include <vector>

#include "ctk/field.hpp"
#include "ctk/matrix.hpp"

namespace ctk {

// Polynomials over Q and Z, lowest degree first, trailing zeros trimmed.
using QPoly = std::vector<Rat>;
using ZPoly = std::vector<Int>;

QPoly charpoly(const RatMatrix& a);
QPoly charpoly(const IntMatrix& a);

// f(a) by Horner's rule.
RatMatrix evaluate(const QPoly& f, const RatMatrix& a);

struct PolyFactor {
    QPoly poly;  // monic irreducible over Q
    unsigned multiplicity = 0;
};

// Yun's algorithm: f = lc * prod_i a_i^i with a_i monic squarefree and pairwise coprime.
// Returns (a_i, i) for the nonconstant a_i.
std::vector<PolyFactor> squarefree_decomposition(const QPoly& f);

// Complete factorization over Q into monic irreducibles, sorted by degree and then
// coefficients. Constant polynomials have no factors.
std::vector<PolyFactor> factor(const QPoly& f);

// Irreducible monic factors over Z of a monic squarefree integer polynomial
// (Zassenhaus: factor modulo a good prime, Hensel lift, recombine).
std::vector<ZPoly> factor_monic_squarefree(const ZPoly& f);

bool is_irreducible(const QPoly& f);

// Polynomial with integer coefficients, for printing and hashing.
std::string to_string(const QPoly& f, const std::string& var = "x");

// Canonical ordering: degree first, then coefficients from the top down.
bool poly_less(const QPoly& a, const QPoly& b);

}  // namespace ctk
