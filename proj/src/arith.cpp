#include "ctk/arith.hpp"

#include <algorithm>

#include "ctk/errors.hpp"

namespace ctk {

Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) throw DomainError("zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace

Int parse_integer(std::string_view text) {
    std::string_view digits = text;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (!all_digits(digits)) throw DomainError("not a decimal integer: '" + std::string(text) + "'");
    std::string s(text);
    if (s.front() == '+') s.erase(0, 1);
    return Int(s, 10);
}

Rat parse_rational(std::string_view text) {
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rat(parse_integer(text));
    Int num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!all_digits(den_text)) throw DomainError("bad denominator in '" + std::string(text) + "'");
    Int den(std::string(den_text), 10);
    if (den == 0) throw DomainError("zero denominator in '" + std::string(text) + "'");
    return make_rat(num, den);
}

std::string to_string(const Int& n) { return n.get_str(10); }

std::string to_string(const Rat& q) {
    if (q.get_den() == 1) return q.get_num().get_str(10);
    return q.get_num().get_str(10) + "/" + q.get_den().get_str(10);
}

Int gcd(const Int& a, const Int& b) {
    Int g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Int lcm(const Int& a, const Int& b) {
    Int l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Int abs(const Int& a) { return a < 0 ? Int(-a) : a; }

Int pow(const Int& base, unsigned long exp) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
    return r;
}

Int mod(const Int& a, const Int& m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int inverse_mod(const Int& a, const Int& m) {
    Int r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0)
        throw DomainError(to_string(a) + " is not invertible modulo " + to_string(m));
    return r;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

bool is_prime_power(const Int& n) {
    if (n < 2) return false;
    auto ps = prime_divisors(n);
    return ps.size() == 1;
}

namespace {

// Brent's variant of Pollard rho; n is odd, composite and not a perfect power of a small prime.
Int pollard_rho(const Int& n) {
    for (unsigned long c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        auto f = [&](const Int& v) { return mod(v * v + c, n); };
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            d = gcd(abs(Int(x - y)), n);
        }
        if (d != n) return d;
    }
}

void collect_prime_divisors(Int n, std::vector<Int>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    Int d = pollard_rho(n);
    collect_prime_divisors(d, out);
    collect_prime_divisors(n / d, out);
}

}  // namespace

std::vector<Int> prime_divisors(const Int& n_in) {
    if (n_in == 0) throw DomainError("prime divisors of zero");
    Int n = abs(n_in);
    std::vector<Int> out;
    for (unsigned long p = 2; p < 100000 && Int(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.emplace_back(p);
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= p;
        }
    }
    if (n > 1) collect_prime_divisors(n, out);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::int64_t> primes_below(std::int64_t bound) {
    std::vector<std::int64_t> out;
    if (bound <= 2) return out;
    std::vector<bool> composite(static_cast<std::size_t>(bound), false);
    for (std::int64_t i = 2; i < bound; ++i) {
        if (composite[static_cast<std::size_t>(i)]) continue;
        out.push_back(i);
        for (std::int64_t j = i * i; j < bound; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
    return out;
}

long Valuation::value() const {
    if (infinite_) throw DomainError("valuation of zero is infinite");
    return value_;
}

std::strong_ordering operator<=>(const Valuation& a, const Valuation& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
}

Valuation valuation(const Int& n, const Int& p) {
    if (!is_prime(p)) throw DomainError(to_string(p) + " is not prime");
    if (n == 0) return Valuation::infinity();
    Int m = n;
    long v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) {
        m /= p;
        ++v;
    }
    return Valuation::finite(v);
}

Valuation valuation(const Rat& x, const Int& p) {
    if (x == 0) {
        if (!is_prime(p)) throw DomainError(to_string(p) + " is not prime");
        return Valuation::infinity();
    }
    return Valuation::finite(valuation(x.get_num(), p).value() - valuation(x.get_den(), p).value());
}

std::string to_string(const Valuation& v) {
    return v.is_infinite() ? std::string("inf") : std::to_string(v.value());
}

}  // namespace ctk
