#include "ctk/field.hpp"

#include <sstream>

namespace ctk {

PrimeField::PrimeField(std::int64_t p) : p_(p) {
    if (p < 2 || p >= (std::int64_t(1) << 31) || !is_prime(Int(static_cast<long>(p))))
        throw DomainError("field characteristic must be a prime below 2^31, got " + std::to_string(p));
}

PrimeField::Elem PrimeField::inv(Elem a) const {
    if (a == 0) throw DomainError("division by zero in F_" + std::to_string(p_));
    // extended Euclid
    std::int64_t r0 = p_, r1 = a, t0 = 0, t1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t r2 = r0 - q * r1, t2 = t0 - q * t1;
        r0 = r1;
        r1 = r2;
        t0 = t1;
        t1 = t2;
    }
    return from_int(t0);
}

PrimeField::Elem PrimeField::from_int(const Int& n) const {
    return static_cast<Elem>(mpz_fdiv_ui(n.get_mpz_t(), static_cast<unsigned long>(p_)));
}

namespace {

using Base = fpoly::Poly<PrimeField>;

bool is_irreducible(const PrimeField& f, const Base& g) {
    const long n = fpoly::degree<PrimeField>(g);
    if (n < 1) return false;
    if (n == 1) return true;
    auto dd = fpoly::distinct_degree(f, g);
    return dd.size() == 1 && dd[0].second == static_cast<unsigned>(n);
}

}  // namespace

std::vector<std::int64_t> canonical_irreducible(std::int64_t p, unsigned m) {
    if (m == 0) throw DomainError("extension degree must be positive");
    PrimeField f(p);
    if (m == 1) return {0, 1};
    // Enumerate (c_{m-1}, ..., c_0) in lexicographic order: counter digits with c_0 least significant.
    std::vector<std::int64_t> c(m, 0);
    for (;;) {
        Base g(c.begin(), c.end());
        g.push_back(1);
        if (c[0] != 0 && is_irreducible(f, g)) return g;
        std::size_t i = 0;
        while (i < m && ++c[i] == p) c[i++] = 0;
        if (i == m) throw std::logic_error("no irreducible polynomial found");
    }
}

GaloisField::GaloisField(std::int64_t p, unsigned m) : base_(p), m_(m), modulus_(canonical_irreducible(p, m)) {}

GaloisField::GaloisField(std::int64_t p, std::vector<std::int64_t> modulus) : base_(p), m_(0), modulus_(std::move(modulus)) {
    for (auto& c : modulus_) c = base_.from_int(c);
    fpoly::trim(base_, modulus_);
    if (modulus_.size() < 2 || modulus_.back() != 1) throw DomainError("field modulus must be monic of positive degree");
    if (!is_irreducible(base_, modulus_)) throw DomainError("field modulus is not irreducible");
    m_ = static_cast<unsigned>(modulus_.size() - 1);
}

Int GaloisField::order() const { return pow(Int(static_cast<long>(base_.characteristic())), m_); }

GaloisField::Elem GaloisField::one() const {
    Elem e(m_, 0);
    e[0] = 1;
    return e;
}

GaloisField::Elem GaloisField::generator() const {
    Elem e(m_, 0);
    if (m_ == 1) {
        e[0] = base_.neg(modulus_[0]);
    } else {
        e[1] = 1;
    }
    return e;
}

GaloisField::Elem GaloisField::add(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (unsigned i = 0; i < m_; ++i) r[i] = base_.add(a[i], b[i]);
    return r;
}

GaloisField::Elem GaloisField::sub(const Elem& a, const Elem& b) const {
    Elem r(m_);
    for (unsigned i = 0; i < m_; ++i) r[i] = base_.sub(a[i], b[i]);
    return r;
}

GaloisField::Elem GaloisField::neg(const Elem& a) const {
    Elem r(m_);
    for (unsigned i = 0; i < m_; ++i) r[i] = base_.neg(a[i]);
    return r;
}

GaloisField::Elem GaloisField::mul(const Elem& a, const Elem& b) const {
    std::vector<std::int64_t> prod(2 * m_ - 1, 0);
    for (unsigned i = 0; i < m_; ++i) {
        if (a[i] == 0) continue;
        for (unsigned j = 0; j < m_; ++j) prod[i + j] = base_.add(prod[i + j], base_.mul(a[i], b[j]));
    }
    for (std::size_t k = prod.size(); k-- > m_;) {
        std::int64_t c = prod[k];
        if (c == 0) continue;
        for (unsigned j = 0; j < m_; ++j) prod[k - m_ + j] = base_.sub(prod[k - m_ + j], base_.mul(c, modulus_[j]));
        prod[k] = 0;
    }
    prod.resize(m_);
    return prod;
}

GaloisField::Elem GaloisField::inv(const Elem& a) const {
    Base av(a.begin(), a.end());
    fpoly::trim(base_, av);
    if (av.empty()) throw DomainError("division by zero in F_q");
    auto [g, s, t] = fpoly::ext_gcd(base_, av, modulus_);
    (void)t;
    Elem r(m_, 0);
    for (std::size_t i = 0; i < s.size() && i < m_; ++i) r[i] = s[i];
    return r;
}

bool GaloisField::is_zero(const Elem& a) const {
    for (auto c : a)
        if (c != 0) return false;
    return true;
}

GaloisField::Elem GaloisField::from_int(const Int& n) const {
    Elem e(m_, 0);
    e[0] = base_.from_int(n);
    return e;
}

GaloisField::Elem GaloisField::from_int(std::int64_t n) const {
    Elem e(m_, 0);
    e[0] = base_.from_int(n);
    return e;
}

GaloisField::Elem GaloisField::random(std::mt19937_64& rng) const {
    Elem e(m_);
    for (auto& c : e) c = base_.random(rng);
    return e;
}

std::string to_string(const GaloisField& F, const GaloisField::Elem& a) {
    (void)F;
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a[i];
    os << ']';
    return os.str();
}

}  // namespace ctk
