#include "ctk/modsym.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ctk::modsym {

namespace {

long lmod(long a, long n) { return ((a % n) + n) % n; }

// Round a/b to the nearest integer, halves away from zero.
long round_div(long a, long b) {
    if (b < 0) {
        a = -a;
        b = -b;
    }
    long q = (2 * std::labs(a) + b) / (2 * b);
    return a < 0 ? -q : q;
}

std::pair<Int, Int> normalize_cusp(Int p, Int q) {
    if (q < 0) {
        p = -p;
        q = -q;
    }
    if (q == 0) return {Int(1), Int(0)};
    Int g = gcd(p, q);
    return {p / g, q / g};
}

// s with p s = 1 mod q (q >= 0, gcd(p, q) = 1).
Int cusp_s(const Int& p, const Int& q) {
    if (q == 0) return p;
    if (q == 1) return 0;
    return inverse_mod(p, q);
}

}  // namespace

bool cusps_equivalent(long N, const std::pair<Int, Int>& a, const std::pair<Int, Int>& b) {
    // Cremona: p1/q1 ~ p2/q2 iff s1 q2 = s2 q1 mod gcd(q1 q2, N).
    Int m = gcd(Int(a.second * b.second), Int(N));
    Int lhs = cusp_s(a.first, a.second) * b.second - cusp_s(b.first, b.second) * a.second;
    return mod(lhs, m) == 0;
}

long ManinSymbolSpace::index_of(long c, long d) const {
    const long N = level;
    return canonical_[static_cast<std::size_t>(lmod(c, N) * N + lmod(d, N))];
}

long cusp_index(const ManinSymbolSpace& space, const Int& p, const Int& q) {
    auto c = normalize_cusp(p, q);
    for (std::size_t i = 0; i < space.cusps.size(); ++i)
        if (cusps_equivalent(space.level, space.cusps[i], c)) return static_cast<long>(i);
    return -1;
}

ManinSymbolSpace build_space(long N) {
    if (N < 1) throw DomainError("level must be positive");
    ManinSymbolSpace S;
    S.level = N;

    std::vector<long> units;
    for (long u = 0; u < N; ++u)
        if (std::gcd(u, N) == 1) units.push_back(u);
    if (N == 1) units = {0};
    std::map<std::pair<long, long>, long> canon_index;
    std::vector<std::pair<long, long>> canon(static_cast<std::size_t>(N * N), {-1, -1});
    for (long c = 0; c < N; ++c)
        for (long d = 0; d < N; ++d) {
            if (std::gcd(std::gcd(c, d), N) != 1) continue;
            std::pair<long, long> best{N, N};
            for (long u : units) best = std::min(best, std::pair<long, long>{(u * c) % N, (u * d) % N});
            canon[static_cast<std::size_t>(c * N + d)] = best;
            canon_index.emplace(best, 0);
        }
    long idx = 0;
    for (auto& [sym, i] : canon_index) {
        i = idx++;
        S.symbols.push_back(sym);
    }
    S.canonical_.assign(static_cast<std::size_t>(N * N), -1);
    for (std::size_t k = 0; k < canon.size(); ++k)
        if (canon[k].first >= 0) S.canonical_[k] = canon_index.at(canon[k]);

    const std::size_t n = S.symbols.size();
    std::vector<std::vector<long>> rels;
    std::set<std::vector<long>> seen;
    auto add_rel = [&](std::vector<long> r) {
        std::sort(r.begin(), r.end());
        if (seen.insert(r).second) rels.push_back(std::move(r));
    };
    for (std::size_t i = 0; i < n; ++i) {
        auto [c, d] = S.symbols[i];
        add_rel({static_cast<long>(i), S.index_of(d, -c)});
        add_rel({static_cast<long>(i), S.index_of(d, -c - d), S.index_of(-c - d, c)});
    }
    S.relations = IntMatrix(rels.size(), n);
    for (std::size_t r = 0; r < rels.size(); ++r)
        for (long j : rels[r]) S.relations(r, static_cast<std::size_t>(j)) += 1;

    auto sw = snf(S.relations, SmithOptions{false, true, true});
    S.relation_rank = sw.smith.rank;
    for (const auto& d : sw.smith.invariant_factors())
        if (d > 1) S.torsion.push_back(d);
    S.free_rank = n - S.relation_rank;
    S.to_free = sw.smith.V.select_cols(S.relation_rank, n);
    S.from_free = sw.V_inverse.select_rows(S.relation_rank, n);

    // Boundary of (c:d) = g{0, oo} with g = [[a, b], [c, d]] in SL_2(Z): [a/c] - [b/d].
    IntMatrix delta(n, 0);
    std::vector<std::pair<std::size_t, std::size_t>> ends(n);
    for (std::size_t i = 0; i < n; ++i) {
        long c = S.symbols[i].first, d = S.symbols[i].second;
        if (c == 0) c = N;
        while (std::gcd(c, d) != 1) d += N;
        Int x, y, g;
        mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), Int(d).get_mpz_t(), Int(c).get_mpz_t());
        // a d - b c = 1 with a = x, b = -y
        Int a = x, b = -y;
        std::pair<Int, Int> cusp_pts[2] = {normalize_cusp(a, Int(c)), normalize_cusp(b, Int(d))};
        std::size_t id[2];
        for (int k = 0; k < 2; ++k) {
            long found = cusp_index(S, cusp_pts[k].first, cusp_pts[k].second);
            if (found < 0) {
                S.cusps.push_back(cusp_pts[k]);
                found = static_cast<long>(S.cusps.size()) - 1;
            }
            id[k] = static_cast<std::size_t>(found);
        }
        ends[i] = {id[0], id[1]};
    }
    delta = IntMatrix(n, S.cusps.size());
    for (std::size_t i = 0; i < n; ++i) {
        delta(i, ends[i].first) += 1;
        delta(i, ends[i].second) -= 1;
    }
    S.boundary = S.from_free * delta;
    return S;
}

CuspidalLattice cuspidal_lattice(const ManinSymbolSpace& space) {
    CuspidalLattice L;
    if (space.free_rank == 0) {
        L.basis = IntMatrix(0, 0);
        return L;
    }
    L.basis = kernel_basis(space.boundary);
    return L;
}

std::vector<std::array<long, 4>> heilbronn_matrices(long l, HeilbronnKind kind) {
    std::vector<std::array<long, 4>> out;
    if (kind == HeilbronnKind::Merel) {
        // ad - bc = l, a > b >= 0, d > c >= 0
        for (long a = 1; a <= l; ++a)
            for (long d = 1; d <= l; ++d)
                for (long b = 0; b < a; ++b)
                    for (long c = 0; c < d; ++c)
                        if (a * d - b * c == l) out.push_back({a, b, c, d});
        return out;
    }
    if (l == 2) return {{1, 0, 0, 2}, {2, 0, 0, 1}, {2, 1, 0, 1}, {1, 0, 1, 2}};
    // Cremona's continued-fraction enumeration.
    out.push_back({1, 0, 0, l});
    for (long r = -(l / 2); r <= l / 2; ++r) {
        long x1 = l, x2 = -r, y1 = 0, y2 = 1, a = -l, b = r;
        out.push_back({x1, x2, y1, y2});
        while (b != 0) {
            long q = round_div(a, b);
            long c = a - b * q;
            a = -b;
            b = c;
            long x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            long y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push_back({x1, x2, y1, y2});
        }
    }
    return out;
}

IntMatrix hecke_operator_free(const ManinSymbolSpace& space, long l, HeilbronnKind kind) {
    if (!is_prime(Int(l))) throw DomainError("T_l needs a prime l, got " + std::to_string(l));
    if (space.level % l == 0) throw DomainError("T_l with l dividing the level is not supported");
    const std::size_t n = space.symbols.size();
    auto mats = heilbronn_matrices(l, kind);
    IntMatrix full(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [u, v] = space.symbols[i];
        for (const auto& m : mats) {
            long j = space.index_of(u * m[0] + v * m[2], u * m[1] + v * m[3]);
            if (j >= 0) full(i, static_cast<std::size_t>(j)) += 1;
        }
    }
    return space.from_free * full * space.to_free;
}

IntMatrix hecke_operator(const ManinSymbolSpace& space, const CuspidalLattice& lattice, long l, HeilbronnKind kind) {
    if (lattice.rank() == 0) {
        if (!is_prime(Int(l))) throw DomainError("T_l needs a prime l, got " + std::to_string(l));
        if (space.level % l == 0) throw DomainError("T_l with l dividing the level is not supported");
        return IntMatrix(0, 0);
    }
    IntMatrix T = hecke_operator_free(space, l, kind);
    RatMatrix K = to_rational(lattice.basis);
    auto R = solve_left(K, K * to_rational(T));
    std::optional<IntMatrix> Ri = R ? to_integer(*R) : std::nullopt;
    if (!Ri) throw std::logic_error("T_l does not preserve the cuspidal lattice");
    return *Ri;
}

HeckeSystem to_hecke_system(const CuspidalLattice& lattice, const std::vector<std::pair<long, IntMatrix>>& operators) {
    std::vector<HeckeOperator> ops;
    for (const auto& [l, m] : operators) ops.push_back({OperatorLabel::tagged(l, 1), m, std::nullopt});
    HeckeSystem H(Lattice::standard(lattice.rank()), std::move(ops));
    if (!check_commuting(H)) throw DomainError("Hecke operators do not commute");
    return H;
}

HeckeSystem cuspidal_system(long N, const std::vector<long>& primes) {
    auto S = build_space(N);
    auto L = cuspidal_lattice(S);
    std::vector<std::pair<long, IntMatrix>> ops;
    for (long l : primes) ops.emplace_back(l, hecke_operator(S, L, l));
    return to_hecke_system(L, ops);
}

}  // namespace ctk::modsym
