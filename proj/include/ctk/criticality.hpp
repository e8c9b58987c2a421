#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctk/arith.hpp"

namespace ctk::crit {

// Summands of a Weil-group representation at an archimedean place.
//   ComplexCharacter: z^a zbar^b (complex place)
//   Induced:          I(chi_l) (real place), 2-dimensional
//   Sign, Trivial:    characters of W_R
// twist is the exponent of |.|; the adjoint tensor product cancels it.
struct WeilSummand {
    enum class Kind { ComplexCharacter, Induced, Sign, Trivial };
    Kind kind = Kind::Trivial;
    Rat a, b;
    long l = 0;
    Rat twist;

    static WeilSummand character(Rat a, Rat b) { return {Kind::ComplexCharacter, std::move(a), std::move(b), 0, 0}; }
    static WeilSummand induced(long l) { return {Kind::Induced, 0, 0, l, 0}; }
    static WeilSummand sign() { return {Kind::Sign, 0, 0, 0, 0}; }
    static WeilSummand trivial() { return {Kind::Trivial, 0, 0, 0, 0}; }

    unsigned dimension() const { return kind == Kind::Induced ? 2 : 1; }
    std::string display() const;
    friend bool operator==(const WeilSummand&, const WeilSummand&) = default;
};

// Gamma_R(s + shift) = pi^{-(s+shift)/2} Gamma((s+shift)/2) or Gamma_C(s + shift) = 2 (2 pi)^{-(s+shift)} Gamma(s+shift).
struct GammaFactor {
    enum class Kind { Real, Complex };
    Kind kind = Kind::Real;
    Rat shift;

    bool has_pole_at(const Rat& s) const;
    std::string display() const;
    friend bool operator==(const GammaFactor&, const GammaFactor&) = default;
    friend bool operator<(const GammaFactor& x, const GammaFactor& y);
};

// A multiset of Gamma factors, kept sorted.
struct GammaShape {
    std::vector<GammaFactor> factors;

    void add(GammaFactor f);
    // Removes one copy; false if absent.
    bool remove(const GammaFactor& f);
    std::size_t count(const GammaFactor& f) const;
    // Gamma_R factors count 1, Gamma_C factors 2.
    unsigned degree() const;
    std::vector<GammaFactor> poles_at(const Rat& s) const;
    std::string display() const;
    friend bool operator==(const GammaShape&, const GammaShape&) = default;
};

struct RealPlaceWeights {
    std::vector<long> l;  // floor(n/2) distinct integers >= 1
    long w = 0;
    // Odd n: the extra character epsilon is sgn (true) or trivial (false).
    bool epsilon_sign = false;
};

struct ComplexPlaceWeights {
    std::vector<std::pair<Rat, Rat>> ab;  // (a_i, b_i), half-integers, a_i + b_i constant
};

struct PlaceWeights {
    bool complex = false;
    RealPlaceWeights real;
    ComplexPlaceWeights cplx;

    static PlaceWeights at_real(RealPlaceWeights w) { return {false, std::move(w), {}}; }
    static PlaceWeights at_complex(ComplexPlaceWeights w) { return {true, {}, std::move(w)}; }
};

// r(pi_v) (x) r(pi~_v) as a list of summands, in a fixed order. Throws DomainError on
// weights of the wrong shape or that are not pure.
std::vector<WeilSummand> ad_parameter(const PlaceWeights& weights, unsigned n);

// trivial -> Gamma_R(s), sign -> Gamma_R(s+1), I(chi_l) -> Gamma_C(s + l/2),
// z^p zbar^q -> Gamma_C(s + max(p, q)); a twist t adds t to the shift.
GammaShape gamma_shape(const std::vector<WeilSummand>& summands);

// Contragredient of a summand list.
std::vector<WeilSummand> dual(const std::vector<WeilSummand>& summands);

struct CriticalityReport {
    bool critical = false;
    unsigned n = 0;
    unsigned r1 = 0, r2 = 0;
    GammaShape full;     // L_infty(s, pi x pi~)
    GammaShape adjoint;  // after removing the zeta_F factor
    std::vector<GammaFactor> poles_at_1, poles_at_0;
    std::string explanation;
};

// weights: r1 real places followed by r2 complex places. s = 1 is critical when the
// adjoint shape is regular at s = 1 and at s = 0. For n = 1 the adjoint
// representation is zero and the report is false (nothing to be critical).
CriticalityReport is_critical_at_1(unsigned r1, unsigned r2, const std::vector<PlaceWeights>& weights, unsigned n);

// Generic weights for tests and the command line: l_j = 2j, w = 0, epsilon trivial;
// a_i = i - 1, b_i = 1 - i.
PlaceWeights generic_weights(bool complex, unsigned n);

// "l1=4,l2=6,w=1,eps=sgn" (real) or "a1=1/2,b1=-1/2,..." (complex); places separated by ';'.
// One spec of a kind is reused for every place of that kind; an empty spec means generic weights.
std::vector<PlaceWeights> parse_weights(const std::string& spec, unsigned r1, unsigned r2, unsigned n);

}  // namespace ctk::crit
