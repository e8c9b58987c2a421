#include "ctk/satake.hpp"

#include <algorithm>
#include <map>

#include "ctk/field.hpp"

namespace ctk {

SatakeSymmetric hecke_to_symmetric(const LocalEigenvalueData& d) {
    SatakeSymmetric s;
    for (std::size_t j = 1; j <= d.n(); ++j) s.e.push_back(Rat(pow(d.q, j * (j - 1) / 2)) * d.chi[j - 1]);
    return s;
}

QPoly local_L_polynomial(const LocalEigenvalueData& d) {
    auto s = hecke_to_symmetric(d);
    QPoly f{Rat(1)};
    for (std::size_t j = 1; j <= s.e.size(); ++j) f.push_back(j % 2 ? -s.e[j - 1] : s.e[j - 1]);
    while (f.size() > 1 && f.back() == 0) f.pop_back();
    return f;
}

namespace {

std::map<Int, const LocalEigenvalueData*> index_by_tag(const std::vector<LocalEigenvalueData>& t, const char* side) {
    std::map<Int, const LocalEigenvalueData*> out;
    for (const auto& d : t)
        if (!out.emplace(d.tag, &d).second) throw DomainError(std::string("table ") + side + ": duplicate tag " + to_string(d.tag));
    return out;
}

}  // namespace

EigensystemCongruenceReport congruent_eigensystems(const std::vector<LocalEigenvalueData>& a,
                                                   const std::vector<LocalEigenvalueData>& b, const Int& p,
                                                   unsigned m, const std::vector<Int>& exclude) {
    if (!is_prime(p) || !p.fits_slong_p()) throw DomainError("satake: " + to_string(p) + " is not a usable prime");
    if (m == 0) throw DomainError("satake: extension degree must be positive");
    GaloisField F(p.get_si(), m);
    auto ia = index_by_tag(a, "a"), ib = index_by_tag(b, "b");

    EigensystemCongruenceReport rep;
    rep.prime = p;
    rep.degree = m;
    auto excluded = [&](const LocalEigenvalueData& d) {
        return mod(d.q, p) == 0 || std::find(exclude.begin(), exclude.end(), d.tag) != exclude.end();
    };
    std::vector<Int> ta, tb;
    for (const auto& [tag, d] : ia) {
        if (excluded(*d))
            rep.excluded_tags.push_back(tag);
        else
            ta.push_back(tag);
    }
    for (const auto& [tag, d] : ib)
        if (!excluded(*d)) tb.push_back(tag);
        else if (!ia.count(tag)) rep.excluded_tags.push_back(tag);
    std::sort(rep.excluded_tags.begin(), rep.excluded_tags.end());
    if (ta != tb) throw DomainError("satake: the two tables cover different prime tags after exclusions");

    auto reduce = [&](const Rat& v) {
        if (mod(v.get_den(), p) == 0) throw DomainError("satake: value " + to_string(v) + " is not integral at " + to_string(p));
        return F.mul(F.from_int(v.get_num()), F.inv(F.from_int(v.get_den())));
    };
    auto show = [&](const GaloisField::Elem& x) { return m == 1 ? std::to_string(x[0]) : to_string(F, x); };
    for (const auto& tag : ta) {
        const auto& da = *ia.at(tag);
        const auto& db = *ib.at(tag);
        if (da.n() != db.n()) throw DomainError("satake: tag " + to_string(tag) + " has different n in the two tables");
        if (da.q != db.q) throw DomainError("satake: tag " + to_string(tag) + " has different q in the two tables");
        auto ea = hecke_to_symmetric(da).e, eb = hecke_to_symmetric(db).e;
        for (std::size_t j = 0; j < ea.size(); ++j) {
            auto ra = reduce(ea[j]), rb = reduce(eb[j]);
            ResiduePair rp{tag, j + 1, show(ra), show(rb), ra == rb};
            rep.congruent = rep.congruent && rp.equal;
            rep.pairs.push_back(std::move(rp));
        }
    }
    rep.tested_tags = std::move(ta);
    return rep;
}

}  // namespace ctk
