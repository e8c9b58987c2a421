#include "ctk/lattice.hpp"

#include <algorithm>

namespace ctk {

Lattice Lattice::from_generators(const RatMatrix& generators) {
    Lattice out;
    out.ambient_dim_ = generators.cols();
    Int d;
    IntMatrix scaled = clear_denominators(generators, &d);
    IntMatrix h = hnf_basis(scaled);
    out.denominator_ = d;
    out.basis_ = make_rat(1, d) * to_rational(h);
    return out;
}

Lattice Lattice::from_basis(const RatMatrix& basis) {
    if (ctk::rank(basis) != basis.rows()) throw DomainError("lattice basis rows are linearly dependent");
    return from_generators(basis);
}

Lattice Lattice::standard(std::size_t n) { return from_generators(RatMatrix::identity(n)); }

Lattice Lattice::zero(std::size_t ambient_dim) { return from_generators(RatMatrix(0, ambient_dim)); }

bool Lattice::contains(std::span<const Rat> v) const {
    if (v.size() != ambient_dim_) return false;
    RatMatrix row(1, ambient_dim_);
    std::copy(v.begin(), v.end(), row.row(0).begin());
    if (rank() == 0) return row.is_zero();
    auto c = solve_left(basis_, row);
    return c && to_integer(*c).has_value();
}

bool Lattice::contains(const Lattice& other) const {
    if (other.ambient_dim_ != ambient_dim_) return false;
    for (std::size_t i = 0; i < other.rank(); ++i)
        if (!contains(other.basis_.row(i))) return false;
    return true;
}

Lattice Lattice::scaled(const Rat& c) const { return from_generators(c * basis_); }

Lattice operator+(const Lattice& a, const Lattice& b) {
    if (a.ambient_dim() != b.ambient_dim()) throw DomainError("lattice sum: ambient dimensions differ");
    return Lattice::from_generators(vstack(a.basis(), b.basis()));
}

Rat BilinearPairing::operator()(std::span<const Rat> v, std::span<const Rat> w) const {
    if (v.size() != gram.rows() || w.size() != gram.cols()) throw DomainError("pairing: dimension mismatch");
    Rat s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 0) continue;
        for (std::size_t j = 0; j < w.size(); ++j) s += v[i] * gram(i, j) * w[j];
    }
    return s;
}

RatMatrix gram_matrix(const RatMatrix& a, const RatMatrix& b, const BilinearPairing& pairing) {
    if (a.cols() != pairing.left_dim() || b.cols() != pairing.right_dim())
        throw DomainError("pairing: dimension mismatch");
    return a * pairing.gram * b.transpose();
}

Lattice dual_lattice(const Lattice& M, const BilinearPairing& pairing, const std::optional<RatMatrix>& target) {
    if (M.ambient_dim() != pairing.right_dim()) throw DomainError("dual lattice: lattice does not live in the pairing's right space");
    const std::size_t k = M.rank();
    RatMatrix S;
    if (target) {
        S = row_space(*target);
        if (S.cols() != pairing.left_dim()) throw DomainError("dual lattice: target subspace has the wrong ambient dimension");
    } else if (k == pairing.left_dim()) {
        S = RatMatrix::identity(k);
    } else {
        S = row_space(M.basis() * pairing.gram.transpose());
    }
    if (S.rows() != k) throw DomainError("dual lattice: the pairing is degenerate on the requested subspaces");
    if (k == 0) return Lattice::zero(pairing.left_dim());
    RatMatrix A = gram_matrix(S, M.basis(), pairing);
    if (determinant(A) == 0) throw DomainError("dual lattice: the pairing is degenerate on the requested subspaces");
    return Lattice::from_basis(inverse(A) * S);
}

Lattice dual_lattice_left(const Lattice& L, const BilinearPairing& pairing, const std::optional<RatMatrix>& target) {
    return dual_lattice(L, pairing.transposed(), target);
}

Lattice intersect_with_subspace(const Lattice& L, const RatMatrix& subspace) {
    if (subspace.cols() != L.ambient_dim()) throw DomainError("intersection: subspace has the wrong ambient dimension");
    if (subspace.rows() == 0) return Lattice::zero(L.ambient_dim());
    RatMatrix N = right_kernel(subspace);  // v in span iff v N = 0
    if (N.cols() == 0 || L.rank() == 0) return L;
    IntMatrix coeff_map = clear_denominators(L.basis() * N);
    IntMatrix K = kernel_basis(coeff_map);
    if (K.rows() == 0) return Lattice::zero(L.ambient_dim());
    return Lattice::from_basis(to_rational(K) * L.basis());
}

Lattice project(const Lattice& L, const RatMatrix& projector) {
    if (projector.rows() != L.ambient_dim() || !projector.is_square()) throw DomainError("projection: dimension mismatch");
    return Lattice::from_generators(L.basis() * projector);
}

Rat discriminant(const Lattice& L1, const Lattice& M1, const BilinearPairing& pairing) {
    if (L1.rank() != M1.rank()) throw DomainError("discriminant: lattices have different ranks");
    if (L1.rank() == 0) return Rat(1);
    Rat d = determinant(gram_matrix(L1.basis(), M1.basis(), pairing));
    if (d == 0) throw DomainError("discriminant: the Gram matrix is degenerate");
    return d;
}

bool is_perfect(const Lattice& L, const Lattice& M, const BilinearPairing& pairing) {
    if (L.rank() != M.rank()) return false;
    return dual_lattice(M, pairing, L.basis()) == L && dual_lattice_left(L, pairing, M.basis()) == M;
}

std::vector<Int> obstruction_primes(const Lattice& L, const Lattice& M, const BilinearPairing& pairing) {
    if (L.rank() != M.rank()) throw DomainError("obstruction primes: lattices have different ranks");
    RatMatrix A = gram_matrix(L.basis(), M.basis(), pairing);
    if (determinant(A) == 0) throw DomainError("obstruction primes: the Gram matrix is degenerate");
    Int d;
    IntMatrix scaled = clear_denominators(A, &d);
    std::vector<Int> primes;
    for (const auto& e : snf(scaled, SmithOptions{false, false, false}).smith.invariant_factors()) {
        Rat q = make_rat(e, d);
        for (const Int& part : {q.get_num(), q.get_den()})
            if (abs(part) > 1)
                for (const auto& p : prime_divisors(part)) primes.push_back(p);
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

std::vector<Int> quotient_invariants(const Lattice& sub, const Lattice& amb) {
    if (sub.rank() != amb.rank()) throw DomainError("quotient: lattices have different ranks, the quotient is infinite");
    if (sub.rank() == 0) return {};
    return elementary_divisors(sub.basis(), amb.basis());
}

Int quotient_order(const Lattice& sub, const Lattice& amb) {
    Int order = 1;
    for (const auto& d : quotient_invariants(sub, amb)) order *= d;
    return order;
}

RatMatrix image(const RatMatrix& projector) { return row_space(projector); }

SplitDecomposition SplitDecomposition::from_projector(const RatMatrix& p1, const std::optional<BilinearPairing>& pairing) {
    if (!p1.is_square()) throw DomainError("projector must be square");
    const std::size_t n = p1.rows();
    SplitDecomposition s;
    s.p1 = p1;
    s.p2 = RatMatrix::identity(n) - p1;
    if (pairing) {
        const RatMatrix& G = pairing->gram;
        if (!G.is_square() || G.rows() != n) throw DomainError("split: the pairing must be square of the projector's size");
        if (determinant(G) == 0) throw DomainError("split: the pairing is degenerate");
        // <x p1, y> = <x, y p1t>  <=>  p1 G = G p1t^t
        s.p1t = (inverse(G) * p1 * G).transpose();
    } else {
        s.p1t = p1.transpose();
    }
    s.p2t = RatMatrix::identity(n) - s.p1t;
    s.validate(pairing);
    return s;
}

void SplitDecomposition::validate(const std::optional<BilinearPairing>& pairing) const {
    const std::size_t n = p1.rows();
    const RatMatrix I = RatMatrix::identity(n);
    auto check = [](bool ok, const char* what) {
        if (!ok) throw DomainError(std::string("split: ") + what);
    };
    check(p1.is_square() && p2.rows() == n && p1t.rows() == n && p2t.rows() == n, "projector sizes differ");
    check(p1 + p2 == I, "projectors on V do not sum to the identity");
    check((p1 * p2).is_zero(), "projectors on V are not complementary");
    check(p1 * p1 == p1 && p2 * p2 == p2, "projectors on V are not idempotent");
    check(p1t + p2t == I, "projectors on W do not sum to the identity");
    check((p1t * p2t).is_zero(), "projectors on W are not complementary");
    check(p1t * p1t == p1t && p2t * p2t == p2t, "projectors on W are not idempotent");
    const RatMatrix G = pairing ? pairing->gram : I;
    check((p1 * G * p2t.transpose()).is_zero(), "V1 is not orthogonal to W2");
    check((p2 * G * p1t.transpose()).is_zero(), "V2 is not orthogonal to W1");
}

}  // namespace ctk
