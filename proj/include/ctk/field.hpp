#pragma once

// Fields and generic dense polynomial / matrix algorithms over them.
//
// A field type F provides: using Elem; zero(), one(), add, sub, mul, neg, inv,
// is_zero, eq, from_int(Int). Finite fields also provide order(), characteristic(),
// degree() and random(rng).

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ctk/arith.hpp"
#include "ctk/errors.hpp"

namespace ctk {

struct RationalField {
    using Elem = Rat;
    Elem zero() const { return Rat(0); }
    Elem one() const { return Rat(1); }
    Elem add(const Elem& a, const Elem& b) const { return a + b; }
    Elem sub(const Elem& a, const Elem& b) const { return a - b; }
    Elem mul(const Elem& a, const Elem& b) const { return a * b; }
    Elem neg(const Elem& a) const { return -a; }
    Elem inv(const Elem& a) const {
        if (a == 0) throw DomainError("division by zero");
        return 1 / a;
    }
    bool is_zero(const Elem& a) const { return a == 0; }
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem from_int(const Int& n) const { return Rat(n); }
};

// Z/p for a prime p < 2^31.
class PrimeField {
public:
    using Elem = std::int64_t;

    explicit PrimeField(std::int64_t p);

    std::int64_t characteristic() const noexcept { return p_; }
    unsigned degree() const noexcept { return 1; }
    Int order() const { return Int(static_cast<long>(p_)); }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    Elem add(Elem a, Elem b) const { return (a + b) % p_; }
    Elem sub(Elem a, Elem b) const { return (a - b + p_) % p_; }
    Elem mul(Elem a, Elem b) const { return (a * b) % p_; }
    Elem neg(Elem a) const { return a == 0 ? 0 : p_ - a; }
    Elem inv(Elem a) const;
    bool is_zero(Elem a) const { return a == 0; }
    bool eq(Elem a, Elem b) const { return a == b; }
    Elem from_int(const Int& n) const;
    Elem from_int(std::int64_t n) const { return ((n % p_) + p_) % p_; }
    Elem random(std::mt19937_64& rng) const { return static_cast<Elem>(rng() % static_cast<std::uint64_t>(p_)); }

    friend bool operator==(const PrimeField&, const PrimeField&) = default;

private:
    std::int64_t p_;
};

// F_p[t] / (modulus), modulus monic irreducible of degree m. Elements are
// coefficient vectors (c_0, ..., c_{m-1}) in the basis 1, t, ..., t^{m-1}.
class GaloisField {
public:
    using Elem = std::vector<std::int64_t>;

    // Uses the canonical modulus: see canonical_irreducible.
    GaloisField(std::int64_t p, unsigned m);
    // modulus is monic, low degree first; irreducibility is verified.
    GaloisField(std::int64_t p, std::vector<std::int64_t> modulus);

    std::int64_t characteristic() const noexcept { return base_.characteristic(); }
    unsigned degree() const noexcept { return m_; }
    Int order() const;
    const PrimeField& base() const noexcept { return base_; }
    const std::vector<std::int64_t>& modulus() const noexcept { return modulus_; }

    Elem zero() const { return Elem(m_, 0); }
    Elem one() const;
    Elem add(const Elem& a, const Elem& b) const;
    Elem sub(const Elem& a, const Elem& b) const;
    Elem mul(const Elem& a, const Elem& b) const;
    Elem neg(const Elem& a) const;
    Elem inv(const Elem& a) const;
    bool is_zero(const Elem& a) const;
    bool eq(const Elem& a, const Elem& b) const { return a == b; }
    Elem from_int(const Int& n) const;
    Elem from_int(std::int64_t n) const;
    Elem random(std::mt19937_64& rng) const;
    // The class of t.
    Elem generator() const;

    bool operator==(const GaloisField& o) const { return base_ == o.base_ && modulus_ == o.modulus_; }

private:
    PrimeField base_;
    unsigned m_;
    std::vector<std::int64_t> modulus_;
};

// The monic irreducible polynomial of degree m over F_p whose coefficient tuple
// (c_{m-1}, ..., c_0) is lexicographically least. Low degree first.
std::vector<std::int64_t> canonical_irreducible(std::int64_t p, unsigned m);

std::string to_string(const GaloisField& F, const GaloisField::Elem& a);

namespace fpoly {

// Dense polynomials, lowest degree first, no trailing zeros (zero polynomial = empty).
template <class F>
using Poly = std::vector<typename F::Elem>;

template <class F>
void trim(const F& f, Poly<F>& a) {
    while (!a.empty() && f.is_zero(a.back())) a.pop_back();
}

template <class F>
long degree(const Poly<F>& a) {
    return static_cast<long>(a.size()) - 1;
}

template <class F>
Poly<F> constant(const F& f, const typename F::Elem& c) {
    Poly<F> p{c};
    trim(f, p);
    return p;
}

template <class F>
Poly<F> x(const F& f) {
    return Poly<F>{f.zero(), f.one()};
}

template <class F>
Poly<F> add(const F& f, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r(std::max(a.size(), b.size()), f.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.add(r[i], b[i]);
    trim(f, r);
    return r;
}

template <class F>
Poly<F> sub(const F& f, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r(std::max(a.size(), b.size()), f.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = f.sub(r[i], b[i]);
    trim(f, r);
    return r;
}

template <class F>
Poly<F> scale(const F& f, const Poly<F>& a, const typename F::Elem& c) {
    Poly<F> r(a.size(), f.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
    trim(f, r);
    return r;
}

template <class F>
Poly<F> mul(const F& f, const Poly<F>& a, const Poly<F>& b) {
    if (a.empty() || b.empty()) return {};
    Poly<F> r(a.size() + b.size() - 1, f.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (f.is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = f.add(r[i + j], f.mul(a[i], b[j]));
    }
    trim(f, r);
    return r;
}

template <class F>
std::pair<Poly<F>, Poly<F>> divmod(const F& f, const Poly<F>& a, const Poly<F>& b) {
    if (b.empty()) throw DomainError("polynomial division by zero");
    Poly<F> r = a, q;
    if (a.size() < b.size()) return {q, r};
    q.assign(a.size() - b.size() + 1, f.zero());
    auto lead_inv = f.inv(b.back());
    for (std::size_t i = r.size(); i-- >= b.size();) {
        if (f.is_zero(r[i])) continue;
        auto c = f.mul(r[i], lead_inv);
        std::size_t shift = i - (b.size() - 1);
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] = f.sub(r[shift + j], f.mul(c, b[j]));
    }
    trim(f, q);
    trim(f, r);
    return {q, r};
}

template <class F>
Poly<F> mod(const F& f, const Poly<F>& a, const Poly<F>& b) {
    return divmod(f, a, b).second;
}

template <class F>
Poly<F> monic(const F& f, const Poly<F>& a) {
    if (a.empty()) return a;
    return scale(f, a, f.inv(a.back()));
}

template <class F>
Poly<F> gcd(const F& f, Poly<F> a, Poly<F> b) {
    while (!b.empty()) {
        auto r = mod(f, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(f, a);
}

// Returns (g, s, t) with s a + t b = g = monic gcd.
template <class F>
std::tuple<Poly<F>, Poly<F>, Poly<F>> ext_gcd(const F& f, const Poly<F>& a, const Poly<F>& b) {
    Poly<F> r0 = a, r1 = b, s0 = constant(f, f.one()), s1, t0, t1 = constant(f, f.one());
    while (!r1.empty()) {
        auto [q, r] = divmod(f, r0, r1);
        r0 = std::move(r1);
        r1 = std::move(r);
        auto s2 = sub(f, s0, mul(f, q, s1));
        auto t2 = sub(f, t0, mul(f, q, t1));
        s0 = std::move(s1);
        s1 = std::move(s2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (r0.empty()) return {r0, s0, t0};
    auto c = f.inv(r0.back());
    return {scale(f, r0, c), scale(f, s0, c), scale(f, t0, c)};
}

template <class F>
Poly<F> derivative(const F& f, const Poly<F>& a) {
    Poly<F> r;
    for (std::size_t i = 1; i < a.size(); ++i) r.push_back(f.mul(a[i], f.from_int(Int(static_cast<unsigned long>(i)))));
    trim(f, r);
    return r;
}

template <class F>
Poly<F> powmod(const F& f, Poly<F> base, Int e, const Poly<F>& m) {
    Poly<F> result = mod(f, constant(f, f.one()), m);
    base = mod(f, base, m);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) result = mod(f, mul(f, result, base), m);
        e >>= 1;
        if (e > 0) base = mod(f, mul(f, base, base), m);
    }
    return result;
}

template <class F>
typename F::Elem evaluate(const F& f, const Poly<F>& a, const typename F::Elem& v) {
    auto r = f.zero();
    for (std::size_t i = a.size(); i-- > 0;) r = f.add(f.mul(r, v), a[i]);
    return r;
}

template <class F>
Poly<F> random_poly(const F& f, std::size_t size, std::mt19937_64& rng) {
    Poly<F> r(size, f.zero());
    for (auto& c : r) c = f.random(rng);
    trim(f, r);
    return r;
}

// Distinct-degree factorization of a monic squarefree polynomial over a finite field:
// pairs (product of all irreducible factors of degree d, d).
template <class F>
std::vector<std::pair<Poly<F>, unsigned>> distinct_degree(const F& f, Poly<F> a) {
    std::vector<std::pair<Poly<F>, unsigned>> out;
    const Int q = f.order();
    Poly<F> xp = x(f);
    Poly<F> h = mod(f, xp, a);
    unsigned d = 0;
    while (degree<F>(a) >= 2 * static_cast<long>(d + 1)) {
        ++d;
        h = powmod(f, h, q, a);
        auto g = gcd(f, a, sub(f, h, xp));
        if (degree<F>(g) > 0) {
            out.emplace_back(g, d);
            a = divmod(f, a, g).first;
            h = mod(f, h, a);
        }
    }
    if (degree<F>(a) > 0) out.emplace_back(monic(f, a), static_cast<unsigned>(degree<F>(a)));
    return out;
}

// Equal-degree splitting (Cantor-Zassenhaus) of a monic squarefree product of
// irreducibles of degree d. The generator is caller-seeded, so results are deterministic.
template <class F>
std::vector<Poly<F>> equal_degree(const F& f, const Poly<F>& a, unsigned d, std::mt19937_64& rng) {
    const long n = degree<F>(a);
    if (n <= static_cast<long>(d)) return {monic(f, a)};
    const Int qd = pow(f.order(), d);
    for (;;) {
        auto r = random_poly(f, static_cast<std::size_t>(n), rng);
        if (degree<F>(r) < 1) continue;
        Poly<F> b;
        if (f.characteristic() == 2) {
            // Trace map to the prime field: r + r^2 + ... + r^(2^(k-1)), q^d = 2^k.
            unsigned long k = mpz_sizeinbase(qd.get_mpz_t(), 2) - 1;
            Poly<F> term = mod(f, r, a), acc = term;
            for (unsigned long i = 1; i < k; ++i) {
                term = mod(f, mul(f, term, term), a);
                acc = add(f, acc, term);
            }
            b = acc;
        } else {
            b = sub(f, powmod(f, r, Int((qd - 1) / 2), a), constant(f, f.one()));
        }
        auto g = gcd(f, a, b);
        if (degree<F>(g) > 0 && degree<F>(g) < n) {
            auto left = equal_degree(f, g, d, rng);
            auto right = equal_degree(f, divmod(f, a, g).first, d, rng);
            left.insert(left.end(), right.begin(), right.end());
            return left;
        }
    }
}

// Monic irreducible factors of a monic squarefree polynomial over a finite field.
template <class F>
std::vector<Poly<F>> factor_squarefree(const F& f, const Poly<F>& a, std::uint64_t seed = 0x5eed) {
    std::mt19937_64 rng(seed);
    std::vector<Poly<F>> out;
    for (auto& [g, d] : distinct_degree(f, monic(f, a))) {
        auto parts = equal_degree(f, g, d, rng);
        out.insert(out.end(), parts.begin(), parts.end());
    }
    return out;
}

// Distinct roots lying in the field itself.
template <class F>
std::vector<typename F::Elem> roots(const F& f, const Poly<F>& a) {
    if (degree<F>(a) < 1) return {};
    auto am = monic(f, a);
    auto xq = powmod(f, x(f), f.order(), am);
    auto g = gcd(f, am, sub(f, xq, x(f)));
    std::vector<typename F::Elem> out;
    if (degree<F>(g) < 1) return out;
    std::mt19937_64 rng(0x600d);
    for (const auto& lin : equal_degree(f, g, 1, rng)) out.push_back(f.neg(lin[0]));
    return out;
}

}  // namespace fpoly

namespace fmat {

template <class F>
using Mat = std::vector<std::vector<typename F::Elem>>;

template <class F>
Mat<F> zeros(const F& f, std::size_t rows, std::size_t cols) {
    return Mat<F>(rows, std::vector<typename F::Elem>(cols, f.zero()));
}

template <class F>
Mat<F> identity(const F& f, std::size_t n) {
    auto m = zeros(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = f.one();
    return m;
}

template <class F>
std::size_t cols_of(const Mat<F>& a, std::size_t fallback = 0) {
    return a.empty() ? fallback : a[0].size();
}

template <class F>
Mat<F> mul(const F& f, const Mat<F>& a, const Mat<F>& b) {
    const std::size_t n = cols_of<F>(b);
    auto c = zeros(f, a.size(), n);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < b.size(); ++k) {
            if (f.is_zero(a[i][k])) continue;
            for (std::size_t j = 0; j < n; ++j) c[i][j] = f.add(c[i][j], f.mul(a[i][k], b[k][j]));
        }
    return c;
}

template <class F>
Mat<F> sub(const F& f, Mat<F> a, const Mat<F>& b) {
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) a[i][j] = f.sub(a[i][j], b[i][j]);
    return a;
}

template <class F>
Mat<F> minus_scalar(const F& f, Mat<F> a, const typename F::Elem& c) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i][i] = f.sub(a[i][i], c);
    return a;
}

template <class F>
Mat<F> transpose(const F& f, const Mat<F>& a, std::size_t cols = 0) {
    const std::size_t n = cols_of<F>(a, cols);
    auto t = zeros(f, n, a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < n; ++j) t[j][i] = a[i][j];
    return t;
}

template <class F>
bool is_zero(const F& f, const Mat<F>& a) {
    for (const auto& r : a)
        for (const auto& x : r)
            if (!f.is_zero(x)) return false;
    return true;
}

// Reduced row echelon form in place; returns pivot columns.
template <class F>
std::vector<std::size_t> rref(const F& f, Mat<F>& a) {
    std::vector<std::size_t> piv;
    const std::size_t m = a.size(), n = cols_of<F>(a);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && f.is_zero(a[p][c])) ++p;
        if (p == m) continue;
        std::swap(a[p], a[r]);
        auto inv = f.inv(a[r][c]);
        for (auto& x : a[r]) x = f.mul(x, inv);
        for (std::size_t i = 0; i < m; ++i) {
            if (i == r || f.is_zero(a[i][c])) continue;
            auto k = a[i][c];
            for (std::size_t j = 0; j < n; ++j) a[i][j] = f.sub(a[i][j], f.mul(k, a[r][j]));
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

template <class F>
std::size_t rank(const F& f, Mat<F> a) {
    return rref(f, a).size();
}

// Basis (rows) of the row space.
template <class F>
Mat<F> row_basis(const F& f, Mat<F> a) {
    auto piv = rref(f, a);
    a.resize(piv.size());
    return a;
}

// Basis (rows) of {x : x a = 0}; a is rows x cols.
template <class F>
Mat<F> left_kernel(const F& f, const Mat<F>& a, std::size_t cols) {
    const std::size_t m = a.size();
    auto t = transpose(f, a, cols);  // cols x m
    auto piv = rref(f, t);
    std::vector<bool> is_piv(m, false);
    for (auto c : piv) is_piv[c] = true;
    Mat<F> out;
    for (std::size_t free = 0; free < m; ++free) {
        if (is_piv[free]) continue;
        std::vector<typename F::Elem> v(m, f.zero());
        v[free] = f.one();
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = f.neg(t[r][free]);
        out.push_back(std::move(v));
    }
    return out;
}

// Basis of the intersection of two row spaces (both given by bases of width n).
template <class F>
Mat<F> intersect(const F& f, const Mat<F>& a, const Mat<F>& b, std::size_t n) {
    if (a.empty() || b.empty()) return {};
    Mat<F> stacked = a;
    stacked.insert(stacked.end(), b.begin(), b.end());
    auto k = left_kernel(f, stacked, n);
    Mat<F> out;
    for (const auto& coeffs : k) {
        std::vector<typename F::Elem> v(n, f.zero());
        for (std::size_t i = 0; i < a.size(); ++i)
            for (std::size_t j = 0; j < n; ++j) v[j] = f.add(v[j], f.mul(coeffs[i], a[i][j]));
        out.push_back(std::move(v));
    }
    return row_basis(f, out);
}

// Matrix of x -> x a restricted to the row space of basis (assumed stable):
// the unique r with basis * a = r * basis.
template <class F>
Mat<F> restrict_to(const F& f, const Mat<F>& a, const Mat<F>& basis) {
    const std::size_t k = basis.size(), n = cols_of<F>(a);
    auto img = mul(f, basis, a);
    // Solve r * basis = img via rref of [basis^t | img^t].
    auto bt = transpose(f, basis, n);
    auto it = transpose(f, img, n);
    Mat<F> aug(n, std::vector<typename F::Elem>(k + k, f.zero()));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < k; ++j) aug[i][j] = bt[i][j];
        for (std::size_t j = 0; j < k; ++j) aug[i][k + j] = it[i][j];
    }
    auto piv = rref(f, aug);
    for (auto c : piv)
        if (c >= k) throw DomainError("subspace is not stable under the operator");
    auto rt = zeros(f, k, k);
    for (std::size_t r = 0; r < piv.size(); ++r)
        for (std::size_t j = 0; j < k; ++j) rt[piv[r]][j] = aug[r][k + j];
    return transpose(f, rt, k);
}

// Characteristic polynomial det(x I - a) via reduction to Hessenberg form.
template <class F>
fpoly::Poly<F> charpoly(const F& f, Mat<F> h) {
    const std::size_t n = h.size();
    for (std::size_t j = 0; j + 2 < n; ++j) {
        std::size_t i = j + 1;
        while (i < n && f.is_zero(h[i][j])) ++i;
        if (i == n) continue;
        if (i != j + 1) {
            std::swap(h[i], h[j + 1]);
            for (auto& row : h) std::swap(row[i], row[j + 1]);
        }
        auto pinv = f.inv(h[j + 1][j]);
        for (std::size_t k = j + 2; k < n; ++k) {
            if (f.is_zero(h[k][j])) continue;
            auto u = f.mul(h[k][j], pinv);
            for (std::size_t c = 0; c < n; ++c) h[k][c] = f.sub(h[k][c], f.mul(u, h[j + 1][c]));
            for (std::size_t r = 0; r < n; ++r) h[r][j + 1] = f.add(h[r][j + 1], f.mul(u, h[r][k]));
        }
    }
    std::vector<fpoly::Poly<F>> p(n + 1);
    p[0] = fpoly::constant(f, f.one());
    for (std::size_t m = 1; m <= n; ++m) {
        fpoly::Poly<F> lin{f.neg(h[m - 1][m - 1]), f.one()};
        fpoly::trim(f, lin);
        p[m] = fpoly::mul(f, lin, p[m - 1]);
        auto t = f.one();
        for (std::size_t i = 1; i < m; ++i) {
            t = f.mul(t, h[m - i][m - i - 1]);
            auto c = f.mul(t, h[m - i - 1][m - 1]);
            p[m] = fpoly::sub(f, p[m], fpoly::scale(f, p[m - i - 1], c));
        }
    }
    return p[n];
}

template <class F>
Mat<F> power(const F& f, const Mat<F>& a, unsigned e) {
    auto r = identity(f, a.size());
    for (unsigned i = 0; i < e; ++i) r = mul(f, r, a);
    return r;
}

}  // namespace fmat

}  // namespace ctk
