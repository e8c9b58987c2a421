#pragma once

#include <string>
#include <vector>

#include "ctk/poly.hpp"

namespace ctk {

// Hecke eigenvalues chi(T_{l,1}), ..., chi(T_{l,n}) at one unramified prime tag l
// with residue field of size q.
struct LocalEigenvalueData {
    Int tag;
    Int q;
    std::vector<Rat> chi;

    std::size_t n() const { return chi.size(); }
};

// Elementary symmetric functions e_1..e_n of the Satake parameters.
struct SatakeSymmetric {
    std::vector<Rat> e;
    // e_n != 0; false flags a degenerate local datum.
    bool central_invertible() const { return !e.empty() && e.back() != 0; }
};

// e_j = q^{j(j-1)/2} chi_j.
SatakeSymmetric hecke_to_symmetric(const LocalEigenvalueData& d);

// sum_j (-1)^j e_j X^j with e_0 = 1, lowest degree first.
QPoly local_L_polynomial(const LocalEigenvalueData& d);

struct ResiduePair {
    Int tag;
    std::size_t j = 0;  // 1-based index of e_j
    std::string a, b;
    bool equal = false;
};

struct EigensystemCongruenceReport {
    Int prime;
    unsigned degree = 1;
    std::vector<Int> tested_tags;
    std::vector<Int> excluded_tags;  // q divisible by p, or excluded by the caller
    std::vector<ResiduePair> pairs;
    bool congruent = true;
};

// Compares e_j(a, l) and e_j(b, l) in F_{p^m} at every tag not excluded. Rejects tag
// sets that differ after the exclusions and values with p in a denominator.
EigensystemCongruenceReport congruent_eigensystems(const std::vector<LocalEigenvalueData>& a,
                                                   const std::vector<LocalEigenvalueData>& b, const Int& p,
                                                   unsigned m = 1, const std::vector<Int>& exclude = {});

}  // namespace ctk
