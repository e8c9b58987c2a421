#include "ctk/poly.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ctk {

namespace {

const RationalField kQ{};

void trim(QPoly& a) { fpoly::trim(kQ, a); }

void trim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly to_q(const ZPoly& a) {
    QPoly r(a.begin(), a.end());
    trim(r);
    return r;
}

// ---- integer polynomial helpers (Zassenhaus) ----

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

ZPoly zsub(const ZPoly& a, const ZPoly& b) {
    ZPoly r(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    trim(r);
    return r;
}

Int symmetric_mod(const Int& c, const Int& m) {
    Int r = mod(c, m);
    if (2 * r > m) r -= m;
    return r;
}

ZPoly zreduce(const ZPoly& a, const Int& m) {
    ZPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = symmetric_mod(a[i], m);
    trim(r);
    return r;
}

// Division by a monic integer polynomial; returns the quotient when exact.
std::optional<ZPoly> zdiv_exact(const ZPoly& a, const ZPoly& b) {
    if (b.empty() || b.back() != 1) throw std::logic_error("zdiv_exact needs a monic divisor");
    ZPoly r = a;
    if (a.size() < b.size()) {
        if (a.empty()) return ZPoly{};
        return std::nullopt;
    }
    ZPoly q(a.size() - b.size() + 1, 0);
    for (std::size_t i = r.size(); i-- >= b.size();) {
        Int c = r[i];
        if (c == 0) continue;
        std::size_t shift = i - (b.size() - 1);
        q[shift] = c;
        for (std::size_t j = 0; j < b.size(); ++j) r[shift + j] -= c * b[j];
    }
    trim(r);
    if (!r.empty()) return std::nullopt;
    trim(q);
    return q;
}

using FpPoly = fpoly::Poly<PrimeField>;

FpPoly to_fp(const PrimeField& F, const ZPoly& a) {
    FpPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.from_int(a[i]);
    fpoly::trim(F, r);
    return r;
}

ZPoly from_fp(const FpPoly& a) {
    ZPoly r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = Int(static_cast<long>(a[i]));
    return r;
}

// Lift f = g h (mod p) to f = G H (mod p^k); f, g, h monic.
std::pair<ZPoly, ZPoly> hensel_lift_pair(const PrimeField& F, const ZPoly& f, const FpPoly& g, const FpPoly& h, unsigned k) {
    auto [one, s, t] = fpoly::ext_gcd(F, g, h);
    if (fpoly::degree<PrimeField>(one) != 0) throw std::logic_error("Hensel lifting: factors are not coprime mod p");
    (void)s;
    const Int p(static_cast<long>(F.characteristic()));
    ZPoly G = from_fp(g), H = from_fp(h);
    Int modulus = p;
    for (unsigned j = 1; j < k; ++j) {
        ZPoly diff = zsub(f, zmul(G, H));
        for (auto& c : diff) {
            if (!mpz_divisible_p(c.get_mpz_t(), modulus.get_mpz_t())) throw std::logic_error("Hensel lifting: inexact step");
            c /= modulus;
        }
        FpPoly e = to_fp(F, diff);
        FpPoly dg = fpoly::mod(F, fpoly::mul(F, e, t), g);
        auto [dh, rem] = fpoly::divmod(F, fpoly::sub(F, e, fpoly::mul(F, dg, h)), g);
        if (!rem.empty()) throw std::logic_error("Hensel lifting: inexact correction");
        ZPoly DG = from_fp(dg), DH = from_fp(dh);
        G.resize(std::max(G.size(), DG.size()), 0);
        H.resize(std::max(H.size(), DH.size()), 0);
        for (std::size_t i = 0; i < DG.size(); ++i) G[i] += modulus * DG[i];
        for (std::size_t i = 0; i < DH.size(); ++i) H[i] += modulus * DH[i];
        modulus *= p;
    }
    return {zreduce(G, modulus), zreduce(H, modulus)};
}

std::vector<ZPoly> hensel_lift(const PrimeField& F, const ZPoly& f, const std::vector<FpPoly>& factors, unsigned k) {
    if (factors.size() == 1) {
        Int m = pow(Int(static_cast<long>(F.characteristic())), k);
        return {zreduce(f, m)};
    }
    FpPoly rest = fpoly::constant(F, F.one());
    for (std::size_t i = 1; i < factors.size(); ++i) rest = fpoly::mul(F, rest, factors[i]);
    auto [G, H] = hensel_lift_pair(F, f, factors[0], rest, k);
    std::vector<ZPoly> out{G};
    auto tail = hensel_lift(F, H, std::vector<FpPoly>(factors.begin() + 1, factors.end()), k);
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

Int coefficient_bound(const ZPoly& f) {
    // Any monic factor g of f satisfies |g_i| <= C(n, i) ||f||_2 <= 2^n ||f||_2.
    Int sq = 0;
    for (const auto& c : f) sq += c * c;
    Int root;
    mpz_sqrt(root.get_mpz_t(), sq.get_mpz_t());
    root += 1;
    return pow(Int(2), static_cast<unsigned long>(f.size() - 1)) * root;
}

}  // namespace

QPoly charpoly(const RatMatrix& a) {
    if (!a.is_square()) throw DomainError("characteristic polynomial of a non-square matrix");
    fmat::Mat<RationalField> m(a.rows(), std::vector<Rat>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = a(i, j);
    return fmat::charpoly(kQ, std::move(m));
}

QPoly charpoly(const IntMatrix& a) { return charpoly(to_rational(a)); }

RatMatrix evaluate(const QPoly& f, const RatMatrix& a) {
    RatMatrix r(a.rows(), a.cols());
    for (std::size_t i = f.size(); i-- > 0;) {
        r = r * a;
        for (std::size_t d = 0; d < a.rows(); ++d) r(d, d) += f[i];
    }
    return r;
}

std::vector<PolyFactor> squarefree_decomposition(const QPoly& f_in) {
    QPoly f = f_in;
    trim(f);
    std::vector<PolyFactor> out;
    if (fpoly::degree<RationalField>(f) < 1) return out;
    f = fpoly::monic(kQ, f);
    QPoly fp = fpoly::derivative(kQ, f);
    QPoly a0 = fpoly::gcd(kQ, f, fp);
    QPoly b = fpoly::divmod(kQ, f, a0).first;
    QPoly c = fpoly::divmod(kQ, fp, a0).first;
    QPoly d = fpoly::sub(kQ, c, fpoly::derivative(kQ, b));
    for (unsigned i = 1; fpoly::degree<RationalField>(b) > 0; ++i) {
        QPoly a = fpoly::gcd(kQ, b, d);
        b = fpoly::divmod(kQ, b, a).first;
        c = fpoly::divmod(kQ, d, a).first;
        d = fpoly::sub(kQ, c, fpoly::derivative(kQ, b));
        if (fpoly::degree<RationalField>(a) > 0) out.push_back({fpoly::monic(kQ, a), i});
    }
    return out;
}

std::vector<ZPoly> factor_monic_squarefree(const ZPoly& f_in) {
    ZPoly f = f_in;
    trim(f);
    if (f.empty() || f.back() != 1) throw DomainError("factor_monic_squarefree expects a monic polynomial");
    const std::size_t n = f.size() - 1;
    if (n <= 1) return {f};

    // Among the first few good primes, take the one with the fewest modular factors.
    std::vector<FpPoly> best;
    std::int64_t best_p = 0;
    int good = 0;
    for (std::int64_t p = 3; good < 6; p += 2) {
        if (!is_prime(Int(static_cast<long>(p)))) continue;
        PrimeField F(p);
        FpPoly fp = to_fp(F, f);
        if (fpoly::degree<PrimeField>(fpoly::gcd(F, fp, fpoly::derivative(F, fp))) != 0) continue;
        ++good;
        auto parts = fpoly::factor_squarefree(F, fp);
        if (best_p == 0 || parts.size() < best.size()) {
            best = std::move(parts);
            best_p = p;
        }
        if (best.size() == 1) break;
    }
    if (best.size() == 1) return {f};
    std::sort(best.begin(), best.end());

    PrimeField F(best_p);
    const Int p(static_cast<long>(best_p));
    const Int bound = 2 * coefficient_bound(f) + 1;
    unsigned k = 1;
    Int modulus = p;
    while (modulus <= bound) {
        modulus *= p;
        ++k;
    }
    std::vector<ZPoly> lifted = hensel_lift(F, f, best, k);

    std::vector<ZPoly> result;
    ZPoly rest = f;
    std::size_t s = 1;
    while (2 * s <= lifted.size()) {
        bool found = false;
        std::vector<std::size_t> idx(s);
        for (std::size_t i = 0; i < s; ++i) idx[i] = i;
        for (;;) {
            ZPoly g{1};
            for (auto i : idx) g = zreduce(zmul(g, lifted[i]), modulus);
            bool const_ok = g[0] == 0 ? rest[0] == 0 : mpz_divisible_p(rest[0].get_mpz_t(), g[0].get_mpz_t()) != 0;
            if (const_ok) {
                if (auto q = zdiv_exact(rest, g)) {
                    result.push_back(g);
                    rest = *q;
                    for (std::size_t j = idx.size(); j-- > 0;) lifted.erase(lifted.begin() + static_cast<std::ptrdiff_t>(idx[j]));
                    found = true;
                    break;
                }
            }
            std::size_t i = s;
            while (i > 0 && idx[i - 1] == lifted.size() - s + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
        }
        if (!found) ++s;
    }
    if (rest.size() > 1) result.push_back(rest);
    return result;
}

std::vector<PolyFactor> factor(const QPoly& f) {
    std::vector<PolyFactor> out;
    for (const auto& [a, mult] : squarefree_decomposition(f)) {
        // Make a integral: D^n a(y / D) is monic with integer coefficients.
        const std::size_t n = a.size() - 1;
        Int D = 1;
        for (const auto& c : a) D = lcm(D, c.get_den());
        ZPoly g(a.size());
        for (std::size_t i = 0; i <= n; ++i) {
            Rat v = a[i] * Rat(pow(D, static_cast<unsigned long>(n - i)));
            g[i] = v.get_num();
        }
        for (const auto& h : factor_monic_squarefree(g)) {
            // h(D x) / D^deg h
            const std::size_t e = h.size() - 1;
            QPoly q(h.size());
            for (std::size_t i = 0; i <= e; ++i) q[i] = Rat(h[i]) * Rat(pow(D, static_cast<unsigned long>(i))) / Rat(pow(D, static_cast<unsigned long>(e)));
            for (auto& c : q) c.canonicalize();
            out.push_back({q, mult});
        }
    }
    std::sort(out.begin(), out.end(), [](const PolyFactor& a, const PolyFactor& b) {
        if (poly_less(a.poly, b.poly)) return true;
        if (poly_less(b.poly, a.poly)) return false;
        return a.multiplicity < b.multiplicity;
    });
    return out;
}

bool is_irreducible(const QPoly& f) {
    auto fs = factor(f);
    return fs.size() == 1 && fs[0].multiplicity == 1;
}

bool poly_less(const QPoly& a, const QPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    for (std::size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

std::string to_string(const QPoly& f, const std::string& var) {
    if (f.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = f.size(); i-- > 0;) {
        const Rat& c = f[i];
        if (c == 0) continue;
        Rat mag = c < 0 ? Rat(-c) : c;
        if (first) {
            if (c < 0) os << '-';
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        first = false;
        bool unit = mag == 1;
        if (i == 0 || !unit) os << to_string(mag);
        if (i > 0) {
            if (!unit) os << '*';
            os << var;
            if (i > 1) os << '^' << i;
        }
    }
    return os.str();
}

}  // namespace ctk
