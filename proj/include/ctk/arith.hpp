#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ctk {

using Int = mpz_class;
using Rat = mpq_class;

Rat make_rat(const Int& num, const Int& den);

// Accepts "n", "-n", "p/q". Whitespace is not allowed.
Rat parse_rational(std::string_view text);
Int parse_integer(std::string_view text);

std::string to_string(const Int& n);
std::string to_string(const Rat& q);

Int gcd(const Int& a, const Int& b);
Int lcm(const Int& a, const Int& b);
Int abs(const Int& a);
Int pow(const Int& base, unsigned long exp);
// Least nonnegative residue.
Int mod(const Int& a, const Int& m);
// Inverse of a modulo m; throws DomainError when not invertible.
Int inverse_mod(const Int& a, const Int& m);

bool is_prime(const Int& n);
bool is_prime_power(const Int& n);
// Distinct prime divisors of |n| in increasing order; n = 0 throws.
std::vector<Int> prime_divisors(const Int& n);
std::vector<std::int64_t> primes_below(std::int64_t bound);

// p-adic valuation. The valuation of zero is a sentinel and never an integer.
class Valuation {
public:
    static Valuation finite(long v) { return Valuation(false, v); }
    static Valuation infinity() { return Valuation(true, 0); }

    bool is_infinite() const noexcept { return infinite_; }
    // Throws DomainError for the infinite valuation.
    long value() const;

    friend bool operator==(const Valuation&, const Valuation&) = default;
    friend std::strong_ordering operator<=>(const Valuation& a, const Valuation& b);

private:
    Valuation(bool inf, long v) : infinite_(inf), value_(v) {}
    bool infinite_;
    long value_;
};

Valuation valuation(const Int& n, const Int& p);
Valuation valuation(const Rat& x, const Int& p);

std::string to_string(const Valuation& v);

}  // namespace ctk
