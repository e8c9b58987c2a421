#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ctk/field.hpp"
#include "ctk/lattice.hpp"
#include "ctk/poly.hpp"

namespace ctk {

// Either a Hecke-style tag (l, j) or a free-form name.
struct OperatorLabel {
    std::optional<long> l;
    std::optional<long> j;
    std::string name;

    static OperatorLabel tagged(long l, long j = 1) { return {l, j, ""}; }
    static OperatorLabel named(std::string n) { return {std::nullopt, std::nullopt, std::move(n)}; }
    bool is_tagged() const { return l.has_value(); }
    // "T(l,j)" for tags, the name otherwise.
    std::string display() const;

    friend bool operator==(const OperatorLabel&, const OperatorLabel&) = default;
    friend bool operator<(const OperatorLabel& a, const OperatorLabel& b);
};

struct HeckeOperator {
    OperatorLabel label;
    IntMatrix matrix;  // acts on lattice coordinates, x -> x * matrix
    std::optional<Rat> normalization_exponent;
};

// A lattice with commuting integer operators written in its basis. Construction
// checks shapes only; call check_commuting for the algebraic condition.
class HeckeSystem {
public:
    HeckeSystem() = default;
    HeckeSystem(Lattice lattice, std::vector<HeckeOperator> operators);

    const Lattice& lattice() const noexcept { return lattice_; }
    const std::vector<HeckeOperator>& operators() const noexcept { return operators_; }
    std::size_t dim() const noexcept { return lattice_.rank(); }
    std::size_t size() const noexcept { return operators_.size(); }
    std::vector<OperatorLabel> labels() const;
    std::vector<RatMatrix> rational_matrices() const;

    // A projector written in lattice coordinates, moved to the ambient space: B^-1 e B.
    RatMatrix to_ambient(const RatMatrix& e) const;

    friend bool operator==(const HeckeSystem&, const HeckeSystem&);

private:
    Lattice lattice_;
    std::vector<HeckeOperator> operators_;
};

bool check_commuting(const HeckeSystem& H);

struct IsotypicComponent {
    RatMatrix basis;      // rref rows, lattice coordinates
    RatMatrix projector;  // onto this component along all the others
    // Per generator: the irreducible f with charpoly(T | component) = f^exponent.
    std::vector<QPoly> factors;
    std::vector<unsigned> exponents;
    // Dimension of the semisimple quotient of the algebra generated on the component;
    // this is the size of the Galois orbit of eigensystems.
    std::size_t orbit_size = 1;
    bool semisimple = true;

    std::size_t dim() const { return basis.rows(); }
    // Rational eigenvalues when every factor is linear.
    std::optional<std::vector<Rat>> rational_values() const;
};

// Minimal Q-rational H-stable pieces, one per Galois orbit of eigensystems, in a
// canonical order (dimension, then factors, then basis).
std::vector<IsotypicComponent> isotypic_decomposition(const HeckeSystem& H);

struct ProjectorPair {
    RatMatrix e1, e2;
};

// e1 projects onto the sum of the selected components along the rest.
ProjectorPair projector_pair(const std::vector<IsotypicComponent>& components, const std::vector<std::size_t>& selection);

// Q-basis of the algebra generated by the matrices (flattened row-major).
RatMatrix algebra_span(const std::vector<RatMatrix>& generators, std::size_t n);

// An eigensystem either in characteristic 0 (rational values) or over F_{p^m}.
struct Eigensystem {
    std::vector<OperatorLabel> labels;
    std::vector<Rat> values;  // characteristic 0
    std::optional<GaloisField> field;
    std::vector<GaloisField::Elem> residues;  // over *field
    std::size_t multiplicity = 1;

    std::int64_t characteristic() const { return field ? field->characteristic() : 0; }
    std::vector<std::string> value_strings() const;
};

// The sublattice L meet im(e), in lattice coordinates, and the operators restricted to it.
struct RestrictedBlock {
    IntMatrix basis;  // rows in lattice coordinates
    std::vector<IntMatrix> operators;
};
RestrictedBlock restrict_block(const HeckeSystem& H, const std::optional<RatMatrix>& restrict);

// Least m such that every generator's eigenvalues mod p on the block lie in F_{p^m}.
unsigned splitting_degree(const HeckeSystem& H, std::int64_t p, const std::optional<RatMatrix>& restrict = std::nullopt);

// Simultaneous eigensystems of the reduced operators over F_{p^m} with multiplicities.
// m defaults to the splitting degree, so every eigensystem is found.
std::vector<Eigensystem> mod_p_eigensystems(const HeckeSystem& H, std::int64_t p,
                                            const std::optional<RatMatrix>& restrict = std::nullopt,
                                            std::optional<unsigned> ext_degree = std::nullopt);

// All images of a generator of src inside dst (requires deg src | deg dst).
std::vector<GaloisField::Elem> embeddings(const GaloisField& src, const GaloisField& dst);
GaloisField::Elem embed(const GaloisField& src, const GaloisField& dst, const GaloisField::Elem& image_of_x,
                        const GaloisField::Elem& a);

// Residues of an eigensystem inside dst under every embedding of its field (one
// tuple for rational input). Rational values with p in a denominator are rejected.
std::vector<std::vector<GaloisField::Elem>> residues_in(const Eigensystem& chi, const GaloisField& dst);

}  // namespace ctk
