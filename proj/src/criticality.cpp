#include "ctk/criticality.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "ctk/errors.hpp"

namespace ctk::crit {

namespace {

bool is_half_integer(const Rat& x) { return x.get_den() == 1 || x.get_den() == 2; }

std::string shift_text(const Rat& m) {
    if (m == 0) return "s";
    if (m > 0) return "s+" + to_string(m);
    return "s-" + to_string(Rat(-m));
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

std::string WeilSummand::display() const {
    std::string base;
    switch (kind) {
        case Kind::ComplexCharacter: base = "z^(" + to_string(a) + ") zbar^(" + to_string(b) + ")"; break;
        case Kind::Induced: base = "I(chi_" + std::to_string(l) + ")"; break;
        case Kind::Sign: base = "sgn"; break;
        case Kind::Trivial: base = "1"; break;
    }
    if (twist != 0) base += "(" + to_string(twist) + ")";
    return base;
}

bool GammaFactor::has_pole_at(const Rat& s) const {
    Rat x = s + shift;
    if (x.get_den() != 1 || x > 0) return false;
    return kind == Kind::Complex || mpz_even_p(x.get_num().get_mpz_t());
}

std::string GammaFactor::display() const {
    return std::string(kind == Kind::Real ? "Gamma_R(" : "Gamma_C(") + shift_text(shift) + ")";
}

bool operator<(const GammaFactor& x, const GammaFactor& y) {
    if (x.kind != y.kind) return x.kind < y.kind;
    return x.shift < y.shift;
}

void GammaShape::add(GammaFactor f) {
    factors.insert(std::upper_bound(factors.begin(), factors.end(), f), std::move(f));
}

bool GammaShape::remove(const GammaFactor& f) {
    auto it = std::find(factors.begin(), factors.end(), f);
    if (it == factors.end()) return false;
    factors.erase(it);
    return true;
}

std::size_t GammaShape::count(const GammaFactor& f) const {
    return static_cast<std::size_t>(std::count(factors.begin(), factors.end(), f));
}

unsigned GammaShape::degree() const {
    unsigned d = 0;
    for (const auto& f : factors) d += f.kind == GammaFactor::Kind::Real ? 1 : 2;
    return d;
}

std::vector<GammaFactor> GammaShape::poles_at(const Rat& s) const {
    std::vector<GammaFactor> out;
    for (const auto& f : factors)
        if (f.has_pole_at(s)) out.push_back(f);
    return out;
}

std::string GammaShape::display() const {
    if (factors.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < factors.size(); ++i) {
        std::size_t j = i;
        while (j + 1 < factors.size() && factors[j + 1] == factors[i]) ++j;
        if (!out.empty()) out += " ";
        out += factors[i].display();
        if (j > i) out += "^" + std::to_string(j - i + 1);
        i = j;
    }
    return out;
}

std::vector<WeilSummand> ad_parameter(const PlaceWeights& weights, unsigned n) {
    if (n == 0) throw DomainError("n must be positive");
    std::vector<WeilSummand> out;
    if (weights.complex) {
        const auto& ab = weights.cplx.ab;
        if (ab.size() != n)
            throw DomainError("complex place needs " + std::to_string(n) + " exponent pairs, got " + std::to_string(ab.size()));
        for (const auto& [a, b] : ab) {
            if (!is_half_integer(a) || !is_half_integer(b)) throw DomainError("exponents must be half-integers");
            if (Rat(a - b).get_den() != 1) throw DomainError("a - b must be an integer");
            if (a + b != ab[0].first + ab[0].second) throw DomainError("weights are not pure: a_i + b_i is not constant");
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                out.push_back(WeilSummand::character(ab[i].first - ab[j].first, ab[i].second - ab[j].second));
        return out;
    }

    const auto& ls = weights.real.l;
    if (ls.size() != n / 2)
        throw DomainError("real place needs " + std::to_string(n / 2) + " values l_j, got " + std::to_string(ls.size()));
    if (std::set<long>(ls.begin(), ls.end()).size() != ls.size()) throw DomainError("the l_j must be distinct");
    for (long l : ls)
        if (l < 1) throw DomainError("l_j must be at least 1");
    // I(chi_l) (x) I(chi_l') = I(chi_{l+l'}) + I(chi_|l-l'|), I(chi_0) = 1 + sgn.
    for (long li : ls)
        for (long lj : ls) {
            out.push_back(WeilSummand::induced(li + lj));
            if (li == lj) {
                out.push_back(WeilSummand::sign());
                out.push_back(WeilSummand::trivial());
            } else {
                out.push_back(WeilSummand::induced(std::labs(li - lj)));
            }
        }
    if (n % 2 == 1) {
        // I(chi_l) (x) eps = I(chi_l), eps (x) eps = 1.
        for (long l : ls) {
            out.push_back(WeilSummand::induced(l));
            out.push_back(WeilSummand::induced(l));
        }
        out.push_back(WeilSummand::trivial());
    }
    return out;
}

GammaShape gamma_shape(const std::vector<WeilSummand>& summands) {
    using K = WeilSummand::Kind;
    GammaShape g;
    for (const auto& s : summands) {
        switch (s.kind) {
            case K::Trivial: g.add({GammaFactor::Kind::Real, s.twist}); break;
            case K::Sign: g.add({GammaFactor::Kind::Real, 1 + s.twist}); break;
            case K::Induced: g.add({GammaFactor::Kind::Complex, make_rat(Int(s.l), Int(2)) + s.twist}); break;
            case K::ComplexCharacter: g.add({GammaFactor::Kind::Complex, std::max(s.a, s.b) + s.twist}); break;
        }
    }
    for (auto& f : g.factors) f.shift.canonicalize();
    return g;
}

std::vector<WeilSummand> dual(const std::vector<WeilSummand>& summands) {
    std::vector<WeilSummand> out = summands;
    for (auto& s : out) {
        s.twist = -s.twist;
        if (s.kind == WeilSummand::Kind::ComplexCharacter) {
            s.a = -s.a;
            s.b = -s.b;
        }
    }
    return out;
}

CriticalityReport is_critical_at_1(unsigned r1, unsigned r2, const std::vector<PlaceWeights>& weights, unsigned n) {
    if (r1 + 2 * r2 == 0) throw DomainError("the field degree r1 + 2 r2 must be positive");
    if (weights.size() != r1 + r2)
        throw DomainError("expected " + std::to_string(r1 + r2) + " place weights, got " + std::to_string(weights.size()));
    for (std::size_t v = 0; v < weights.size(); ++v)
        if (weights[v].complex != (v >= r1))
            throw DomainError("place " + std::to_string(v) + " should be " + (v >= r1 ? "complex" : "real"));

    CriticalityReport rep;
    rep.n = n;
    rep.r1 = r1;
    rep.r2 = r2;
    for (const auto& w : weights)
        for (const auto& f : gamma_shape(ad_parameter(w, n)).factors) rep.full.add(f);
    rep.adjoint = rep.full;
    const GammaFactor zeta_real{GammaFactor::Kind::Real, 0}, zeta_complex{GammaFactor::Kind::Complex, 0};
    for (unsigned v = 0; v < r1; ++v)
        if (!rep.adjoint.remove(zeta_real)) throw std::logic_error("missing Gamma_R(s) for the zeta factor");
    for (unsigned v = 0; v < r2; ++v)
        if (!rep.adjoint.remove(zeta_complex)) throw std::logic_error("missing Gamma_C(s) for the zeta factor");

    rep.poles_at_1 = rep.adjoint.poles_at(1);
    rep.poles_at_0 = rep.adjoint.poles_at(0);
    if (n == 1) {
        rep.critical = false;
        rep.explanation = "n = 1: the adjoint representation is zero";
        return rep;
    }
    rep.critical = rep.poles_at_1.empty() && rep.poles_at_0.empty();
    if (rep.critical) {
        rep.explanation = "L_infty(s, Ad0) ~ " + rep.adjoint.display() + " is regular at s = 0 and s = 1";
    } else {
        const auto& bad = rep.poles_at_0.empty() ? rep.poles_at_1 : rep.poles_at_0;
        rep.explanation = bad.front().display() + " has a pole at s = " + (rep.poles_at_0.empty() ? "1" : "0");
    }
    return rep;
}

PlaceWeights generic_weights(bool complex, unsigned n) {
    if (complex) {
        ComplexPlaceWeights w;
        for (unsigned i = 0; i < n; ++i) w.ab.emplace_back(Rat(i), Rat(-static_cast<long>(i)));
        return PlaceWeights::at_complex(w);
    }
    RealPlaceWeights w;
    for (unsigned j = 1; j <= n / 2; ++j) w.l.push_back(2 * static_cast<long>(j));
    return PlaceWeights::at_real(w);
}

std::vector<PlaceWeights> parse_weights(const std::string& spec, unsigned r1, unsigned r2, unsigned n) {
    std::vector<PlaceWeights> reals, complexes;
    for (const auto& raw : split(spec, ';')) {
        std::string item = trim(raw);
        if (item.empty()) continue;
        std::map<std::string, std::string> kv;
        for (const auto& part : split(item, ',')) {
            std::string p = trim(part);
            auto eq = p.find('=');
            if (eq == std::string::npos || eq == 0) throw DomainError("weight entry '" + p + "' is not key=value");
            if (!kv.emplace(p.substr(0, eq), p.substr(eq + 1)).second) throw DomainError("weight key '" + p.substr(0, eq) + "' repeated");
        }
        bool cplx = std::any_of(kv.begin(), kv.end(), [](const auto& e) { return e.first[0] == 'a' || e.first[0] == 'b'; });
        if (cplx) {
            ComplexPlaceWeights w;
            for (unsigned i = 1; i <= n; ++i) {
                auto a = kv.find("a" + std::to_string(i)), b = kv.find("b" + std::to_string(i));
                if (a == kv.end() || b == kv.end()) throw DomainError("complex weights need a" + std::to_string(i) + " and b" + std::to_string(i));
                w.ab.emplace_back(parse_rational(a->second), parse_rational(b->second));
                kv.erase(a);
                kv.erase(b);
            }
            if (!kv.empty()) throw DomainError("unexpected weight key '" + kv.begin()->first + "'");
            complexes.push_back(PlaceWeights::at_complex(std::move(w)));
        } else {
            RealPlaceWeights w;
            for (unsigned j = 1; j <= n / 2; ++j) {
                auto it = kv.find("l" + std::to_string(j));
                if (it == kv.end()) throw DomainError("real weights need l" + std::to_string(j));
                w.l.push_back(parse_integer(it->second).get_si());
                kv.erase(it);
            }
            if (auto it = kv.find("w"); it != kv.end()) {
                w.w = parse_integer(it->second).get_si();
                kv.erase(it);
            }
            if (auto it = kv.find("eps"); it != kv.end()) {
                if (it->second != "sgn" && it->second != "1") throw DomainError("eps must be sgn or 1");
                w.epsilon_sign = it->second == "sgn";
                kv.erase(it);
            }
            if (!kv.empty()) throw DomainError("unexpected weight key '" + kv.begin()->first + "'");
            reals.push_back(PlaceWeights::at_real(std::move(w)));
        }
    }
    auto expand = [n](std::vector<PlaceWeights>& given, unsigned count, bool complex) {
        if (count == 0 && !given.empty())
            throw DomainError(std::string("weights given for a ") + (complex ? "complex" : "real") + " place but there is none");
        if (given.empty()) given.push_back(generic_weights(complex, n));
        if (given.size() == 1) given.resize(count, given.front());
        if (given.size() != count)
            throw DomainError(std::string("got ") + std::to_string(given.size()) + (complex ? " complex" : " real") +
                              " weight specs for " + std::to_string(count) + " places");
    };
    expand(reals, r1, false);
    expand(complexes, r2, true);
    reals.insert(reals.end(), complexes.begin(), complexes.end());
    return reals;
}

}  // namespace ctk::crit
