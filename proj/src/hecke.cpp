#include "ctk/hecke.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <tuple>

namespace ctk {

std::string OperatorLabel::display() const {
    if (is_tagged()) return "T(" + std::to_string(*l) + "," + std::to_string(j.value_or(1)) + ")";
    return name;
}

bool operator<(const OperatorLabel& a, const OperatorLabel& b) {
    if (a.is_tagged() != b.is_tagged()) return a.is_tagged();
    return std::tie(a.l, a.j, a.name) < std::tie(b.l, b.j, b.name);
}

HeckeSystem::HeckeSystem(Lattice lattice, std::vector<HeckeOperator> operators)
    : lattice_(std::move(lattice)), operators_(std::move(operators)) {
    const std::size_t r = lattice_.rank();
    for (const auto& op : operators_)
        if (op.matrix.rows() != r || op.matrix.cols() != r)
            throw DomainError("operator " + op.label.display() + " is not " + std::to_string(r) + "x" + std::to_string(r));
    for (std::size_t i = 0; i < operators_.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (operators_[i].label == operators_[j].label)
                throw DomainError("duplicate operator label " + operators_[i].label.display());
}

std::vector<OperatorLabel> HeckeSystem::labels() const {
    std::vector<OperatorLabel> out;
    for (const auto& op : operators_) out.push_back(op.label);
    return out;
}

std::vector<RatMatrix> HeckeSystem::rational_matrices() const {
    std::vector<RatMatrix> out;
    for (const auto& op : operators_) out.push_back(to_rational(op.matrix));
    return out;
}

RatMatrix HeckeSystem::to_ambient(const RatMatrix& e) const {
    if (!lattice_.full_rank()) throw DomainError("ambient projector needs a full-rank lattice");
    const RatMatrix& B = lattice_.basis();
    return inverse(B) * e * B;
}

bool operator==(const HeckeSystem& a, const HeckeSystem& b) {
    if (!(a.lattice_ == b.lattice_) || a.operators_.size() != b.operators_.size()) return false;
    for (std::size_t i = 0; i < a.operators_.size(); ++i) {
        const auto& x = a.operators_[i];
        const auto& y = b.operators_[i];
        if (!(x.label == y.label) || !(x.matrix == y.matrix) || x.normalization_exponent != y.normalization_exponent)
            return false;
    }
    return true;
}

bool check_commuting(const HeckeSystem& H) {
    const auto& ops = H.operators();
    for (std::size_t i = 0; i < ops.size(); ++i)
        for (std::size_t j = i + 1; j < ops.size(); ++j)
            if (!(ops[i].matrix * ops[j].matrix == ops[j].matrix * ops[i].matrix)) return false;
    return true;
}

std::optional<std::vector<Rat>> IsotypicComponent::rational_values() const {
    std::vector<Rat> out;
    for (const auto& f : factors) {
        if (f.size() != 2) return std::nullopt;
        out.push_back(-f[0]);
    }
    return out;
}

namespace {

// Echelon basis grown one vector at a time.
class IncrementalSpan {
public:
    explicit IncrementalSpan(std::size_t n) : n_(n) {}

    // Adds v if it is independent of the current span; returns whether it was added.
    bool add(std::vector<Rat> v) {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            const Rat& c = v[pivots_[r]];
            if (c == 0) continue;
            Rat k = c;
            for (std::size_t j = 0; j < n_; ++j) v[j] -= k * rows_[r][j];
        }
        auto it = std::find_if(v.begin(), v.end(), [](const Rat& x) { return x != 0; });
        if (it == v.end()) return false;
        std::size_t piv = static_cast<std::size_t>(it - v.begin());
        Rat inv = 1 / v[piv];
        for (auto& x : v) x *= inv;
        for (auto& row : rows_) {
            Rat k = row[piv];
            if (k == 0) continue;
            for (std::size_t j = 0; j < n_; ++j) row[j] -= k * v[j];
        }
        rows_.push_back(std::move(v));
        pivots_.push_back(piv);
        return true;
    }
    std::size_t size() const { return rows_.size(); }

private:
    std::size_t n_;
    std::vector<std::vector<Rat>> rows_;
    std::vector<std::size_t> pivots_;
};

std::vector<Rat> flatten(const RatMatrix& m) { return {m.data().begin(), m.data().end()}; }

// The matrices of a Q-basis of the algebra generated by gens (n x n).
std::vector<RatMatrix> algebra_elements(const std::vector<RatMatrix>& gens, std::size_t n) {
    IncrementalSpan span(n * n);
    std::vector<RatMatrix> elems{RatMatrix::identity(n)};
    span.add(flatten(elems[0]));
    for (std::size_t head = 0; head < elems.size(); ++head)
        for (const auto& g : gens) {
            RatMatrix prod = elems[head] * g;
            if (span.add(flatten(prod))) elems.push_back(std::move(prod));
        }
    return elems;
}

Rat trace(const RatMatrix& a) {
    Rat t = 0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

// R with W T = R W, for W a basis of a T-stable subspace.
RatMatrix restrict_rat(const RatMatrix& T, const RatMatrix& W) {
    auto R = solve_left(W, W * T);
    if (!R) throw std::logic_error("subspace is not stable under an operator");
    return *R;
}

RatMatrix matrix_power(RatMatrix a, unsigned e) {
    RatMatrix r = RatMatrix::identity(a.rows());
    while (e) {
        if (e & 1) r = r * a;
        e >>= 1;
        if (e) a = a * a;
    }
    return r;
}

// Generalized eigenspaces of R (acting on W-coordinates), one per irreducible factor.
std::vector<RatMatrix> primary_split(const RatMatrix& W, const RatMatrix& R, const std::vector<PolyFactor>& fs) {
    std::vector<RatMatrix> out;
    for (const auto& pf : fs) {
        RatMatrix N = matrix_power(evaluate(pf.poly, R), pf.multiplicity);
        out.push_back(left_kernel(N) * W);
    }
    return out;
}

bool component_less(const IsotypicComponent& a, const IsotypicComponent& b) {
    if (a.dim() != b.dim()) return a.dim() < b.dim();
    for (std::size_t i = 0; i < a.factors.size(); ++i) {
        if (poly_less(a.factors[i], b.factors[i])) return true;
        if (poly_less(b.factors[i], a.factors[i])) return false;
    }
    return a.basis.data() < b.basis.data();
}

}  // namespace

RatMatrix algebra_span(const std::vector<RatMatrix>& generators, std::size_t n) {
    auto elems = algebra_elements(generators, n);
    RatMatrix out(elems.size(), n * n);
    for (std::size_t i = 0; i < elems.size(); ++i)
        std::copy(elems[i].data().begin(), elems[i].data().end(), out.row(i).begin());
    return out;
}

std::vector<IsotypicComponent> isotypic_decomposition(const HeckeSystem& H) {
    if (!check_commuting(H)) throw DomainError("operators do not commute");
    const std::size_t r = H.dim();
    if (r == 0) return {};
    const auto gens = H.rational_matrices();

    std::vector<RatMatrix> queue{RatMatrix::identity(r)};
    // Per-generator primary decomposition first; always correct, often enough.
    for (const auto& T : gens) {
        std::vector<RatMatrix> next;
        for (const auto& W : queue) {
            RatMatrix R = restrict_rat(T, W);
            auto fs = factor(charpoly(R));
            if (fs.size() <= 1) {
                next.push_back(W);
            } else {
                for (auto& piece : primary_split(W, R, fs)) next.push_back(std::move(piece));
            }
        }
        queue = std::move(next);
    }

    std::vector<IsotypicComponent> done;
    while (!queue.empty()) {
        RatMatrix W = std::move(queue.back());
        queue.pop_back();
        const std::size_t d = W.rows();
        std::vector<RatMatrix> mats;
        for (const auto& T : gens) mats.push_back(restrict_rat(T, W));

        auto elems = algebra_elements(mats, d);
        RatMatrix tform(elems.size(), elems.size());
        for (std::size_t a = 0; a < elems.size(); ++a)
            for (std::size_t b = a; b < elems.size(); ++b) tform(a, b) = tform(b, a) = trace(elems[a] * elems[b]);
        const std::size_t orbit = rank(tform);

        auto finish = [&] {
            IsotypicComponent c;
            c.basis = rref(W);
            for (const auto& R : mats) {
                auto fs = factor(charpoly(R));
                if (fs.size() != 1) throw std::logic_error("isotypic component is not primary");
                c.factors.push_back(fs[0].poly);
                c.exponents.push_back(fs[0].multiplicity);
            }
            c.orbit_size = orbit;
            c.semisimple = elems.size() == orbit;
            done.push_back(std::move(c));
        };
        if (orbit == 1 || mats.empty()) {
            finish();
            continue;
        }
        // Generic combinations c = A_0 + k A_1 + k^2 A_2 + ...; a value of k fails only
        // when it is a root of one of at most d^2 nonzero polynomials of degree < #ops.
        const std::size_t bound = d * d * mats.size() + 1;
        bool resolved = false;
        for (std::size_t k = 1; k <= bound && !resolved; ++k) {
            RatMatrix c(d, d);
            Rat kp = 1;
            for (const auto& A : mats) {
                c = c + kp * A;
                kp *= static_cast<unsigned long>(k);
            }
            auto fs = factor(charpoly(c));
            if (fs.size() > 1) {
                for (auto& piece : primary_split(W, c, fs)) queue.push_back(std::move(piece));
                resolved = true;
            } else if (fs[0].poly.size() - 1 == orbit) {
                finish();
                resolved = true;
            }
        }
        if (!resolved) throw std::logic_error("isotypic splitting did not converge");
    }

    std::sort(done.begin(), done.end(), component_less);
    RatMatrix all(0, r);
    for (const auto& c : done) all = vstack(all, c.basis);
    RatMatrix all_inv = inverse(all);
    std::size_t offset = 0;
    for (auto& c : done) {
        std::vector<Rat> sel(r, 0);
        for (std::size_t i = 0; i < c.dim(); ++i) sel[offset + i] = 1;
        c.projector = all_inv * RatMatrix::diagonal(sel) * all;
        offset += c.dim();
    }
    return done;
}

ProjectorPair projector_pair(const std::vector<IsotypicComponent>& components, const std::vector<std::size_t>& selection) {
    if (selection.empty()) throw DomainError("projector pair: empty selection");
    std::vector<std::size_t> sel = selection;
    std::sort(sel.begin(), sel.end());
    if (std::adjacent_find(sel.begin(), sel.end()) != sel.end()) throw DomainError("projector pair: repeated component");
    if (sel.back() >= components.size()) throw DomainError("projector pair: component index out of range");
    if (sel.size() == components.size()) throw DomainError("projector pair: selection contains every component");
    const std::size_t n = components.front().projector.rows();
    ProjectorPair out{RatMatrix(n, n), RatMatrix()};
    for (auto i : sel) out.e1 = out.e1 + components[i].projector;
    out.e2 = RatMatrix::identity(n) - out.e1;
    return out;
}

std::vector<std::string> Eigensystem::value_strings() const {
    std::vector<std::string> out;
    if (field)
        for (const auto& r : residues) out.push_back(field->degree() == 1 ? std::to_string(r[0]) : to_string(*field, r));
    else
        for (const auto& v : values) out.push_back(to_string(v));
    return out;
}

RestrictedBlock restrict_block(const HeckeSystem& H, const std::optional<RatMatrix>& restrict) {
    RestrictedBlock out;
    const std::size_t r = H.dim();
    if (!restrict) {
        out.basis = IntMatrix::identity(r);
        for (const auto& op : H.operators()) out.operators.push_back(op.matrix);
        return out;
    }
    if (restrict->rows() != r || restrict->cols() != r) throw DomainError("restricting projector has the wrong size");
    RatMatrix img = row_space(*restrict);
    if (img.rows() == 0) {
        out.basis = IntMatrix(0, r);
        for (std::size_t i = 0; i < H.size(); ++i) out.operators.emplace_back(0, 0);
        return out;
    }
    out.basis = saturate(primitive_rows(img));
    RatMatrix K = to_rational(out.basis);
    for (const auto& op : H.operators()) {
        auto R = solve_left(K, K * to_rational(op.matrix));
        std::optional<IntMatrix> Ri = R ? to_integer(*R) : std::nullopt;
        if (!Ri) throw DomainError("the image of the projector is not stable under " + op.label.display());
        out.operators.push_back(*Ri);
    }
    return out;
}

namespace {

using PPoly = fpoly::Poly<PrimeField>;

// Distinct monic irreducible factors over F_p of a nonzero polynomial.
void irreducible_factors(const PrimeField& F, PPoly f, std::vector<PPoly>& out) {
    f = fpoly::monic(F, f);
    if (fpoly::degree<PrimeField>(f) < 1) return;
    PPoly d = fpoly::derivative(F, f);
    if (d.empty()) {
        // f(x) = g(x^p) = g(x)^p over F_p
        const auto p = static_cast<std::size_t>(F.characteristic());
        PPoly g;
        for (std::size_t i = 0; i < f.size(); i += p) g.push_back(f[i]);
        irreducible_factors(F, g, out);
        return;
    }
    PPoly g = fpoly::gcd(F, f, d);
    PPoly s = fpoly::divmod(F, f, g).first;  // product of factors with multiplicity prime to p
    if (fpoly::degree<PrimeField>(s) >= 1)
        for (auto& q : fpoly::factor_squarefree(F, fpoly::monic(F, s))) out.push_back(std::move(q));
    irreducible_factors(F, g, out);
}

template <class F>
fmat::Mat<F> reduce(const F& field, const IntMatrix& m) {
    fmat::Mat<F> out(m.rows(), std::vector<typename F::Elem>(m.cols(), field.zero()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = field.from_int(m(i, j));
    return out;
}

}  // namespace

unsigned splitting_degree(const HeckeSystem& H, std::int64_t p, const std::optional<RatMatrix>& restrict) {
    PrimeField F(p);
    auto block = restrict_block(H, restrict);
    unsigned m = 1;
    for (const auto& R : block.operators) {
        if (R.rows() == 0) continue;
        std::vector<PPoly> fs;
        irreducible_factors(F, fmat::charpoly(F, reduce(F, R)), fs);
        for (const auto& f : fs) m = std::lcm(m, static_cast<unsigned>(f.size() - 1));
    }
    return m;
}

std::vector<Eigensystem> mod_p_eigensystems(const HeckeSystem& H, std::int64_t p, const std::optional<RatMatrix>& restrict,
                                            std::optional<unsigned> ext_degree) {
    if (!is_prime(Int(static_cast<long>(p)))) throw DomainError("mod p eigensystems: " + std::to_string(p) + " is not prime");
    const unsigned m = ext_degree ? *ext_degree : splitting_degree(H, p, restrict);
    if (m == 0) throw DomainError("extension degree must be positive");
    GaloisField F(p, m);
    auto block = restrict_block(H, restrict);
    const std::size_t k = block.basis.rows();
    if (k == 0) return {};

    using Elem = GaloisField::Elem;
    struct Piece {
        fmat::Mat<GaloisField> basis;
        std::vector<Elem> values;
    };
    std::vector<Piece> pieces{{fmat::identity(F, k), {}}};
    for (const auto& R : block.operators) {
        auto Rf = reduce(F, R);
        std::vector<Piece> next;
        for (const auto& piece : pieces) {
            const std::size_t w = piece.basis.size();
            auto Rw = fmat::restrict_to(F, Rf, piece.basis);
            auto roots = fpoly::roots(F, fmat::charpoly(F, Rw));
            std::sort(roots.begin(), roots.end());
            for (const auto& lambda : roots) {
                auto N = fmat::power(F, fmat::minus_scalar(F, Rw, lambda), static_cast<unsigned>(w));
                auto K = fmat::left_kernel(F, N, w);
                Piece q{fmat::mul(F, K, piece.basis), piece.values};
                q.values.push_back(lambda);
                next.push_back(std::move(q));
            }
        }
        pieces = std::move(next);
    }

    std::vector<Eigensystem> out;
    for (auto& piece : pieces) {
        Eigensystem e;
        e.labels = H.labels();
        e.field = F;
        e.residues = std::move(piece.values);
        e.multiplicity = piece.basis.size();
        out.push_back(std::move(e));
    }
    std::sort(out.begin(), out.end(), [](const Eigensystem& a, const Eigensystem& b) { return a.residues < b.residues; });
    return out;
}

std::vector<GaloisField::Elem> embeddings(const GaloisField& src, const GaloisField& dst) {
    if (src.characteristic() != dst.characteristic() || dst.degree() % src.degree() != 0)
        throw DomainError("no embedding between the residue fields");
    fpoly::Poly<GaloisField> g;
    for (auto c : src.modulus()) g.push_back(dst.from_int(c));
    auto r = fpoly::roots(dst, g);
    std::sort(r.begin(), r.end());
    return r;
}

GaloisField::Elem embed(const GaloisField& src, const GaloisField& dst, const GaloisField::Elem& image_of_x,
                        const GaloisField::Elem& a) {
    GaloisField::Elem out = dst.zero();
    for (std::size_t i = src.degree(); i-- > 0;) out = dst.add(dst.mul(out, image_of_x), dst.from_int(a[i]));
    return out;
}

std::vector<std::vector<GaloisField::Elem>> residues_in(const Eigensystem& chi, const GaloisField& dst) {
    std::vector<std::vector<GaloisField::Elem>> out;
    if (chi.field) {
        for (const auto& x : embeddings(*chi.field, dst)) {
            std::vector<GaloisField::Elem> t;
            for (const auto& r : chi.residues) t.push_back(embed(*chi.field, dst, x, r));
            out.push_back(std::move(t));
        }
        return out;
    }
    const Int p(static_cast<long>(dst.characteristic()));
    std::vector<GaloisField::Elem> t;
    for (const auto& v : chi.values) {
        if (mod(v.get_den(), p) == 0) throw DomainError("eigenvalue " + to_string(v) + " is not integral at " + to_string(p));
        t.push_back(dst.mul(dst.from_int(v.get_num()), dst.inv(dst.from_int(v.get_den()))));
    }
    out.push_back(std::move(t));
    return out;
}

}  // namespace ctk
