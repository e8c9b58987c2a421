#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ctk/hecke.hpp"
#include "ctk/satake.hpp"

namespace ctk::io {

using Json = nlohmann::json;

inline constexpr const char* kToolkitVersion = "0.1.0";

// Strict JSON reader. Non-integral numbers throw SchemaError("... floats forbidden"),
// duplicate keys are rejected, and integer literals beyond 64 bits come back as
// decimal strings so they survive exactly.
Json parse_json(std::string_view text);

// Sorted keys, no whitespace. The byte string that gets hashed.
std::string canonical_json(const Json& j);
std::string sha256_hex(std::string_view bytes);
std::string content_digest(const Json& j);

// Path-qualified readers. Numbers may be JSON integers or "n" / "p/q" strings.
Int read_integer(const Json& j, const std::string& path);
Rat read_rational(const Json& j, const std::string& path);
RatMatrix read_rational_matrix(const Json& j, const std::string& path, std::optional<std::size_t> cols = std::nullopt);
IntMatrix read_integer_matrix(const Json& j, const std::string& path, std::optional<std::size_t> cols = std::nullopt);

Json to_json(const Int& x);
Json to_json(const Rat& x);
Json to_json(const IntMatrix& m);
Json to_json(const RatMatrix& m);

// A Hecke system with an optional pairing, as stored on disk:
//   {ambient_dim, lattice_basis, dual_lattice_basis?, pairing_gram?,
//    operators: [{label: {l, j} | name, matrix, normalization_exponent?}], metadata}
// Operator matrices act on row vectors of lattice coordinates relative to the listed
// basis; "dim", "basis" and an operator-level "name" are accepted as aliases.
struct Instance {
    HeckeSystem system;
    std::optional<Lattice> dual_lattice;
    std::optional<BilinearPairing> pairing;
    Json metadata = Json::object();

    BilinearPairing pairing_or_standard() const;
    // The given dual lattice, or the dual of the lattice under the pairing.
    Lattice dual_or_computed() const;
    friend bool operator==(const Instance&, const Instance&);
};

// Validates shapes, integrality of the operators (lattice stability) and commutativity.
Instance instance_from_json(const Json& doc);
Instance parse_instance(std::string_view bytes);
// Written with the canonical lattice basis, so parse(serialize(x)) == x.
Json instance_to_json(const Instance& inst);
std::string serialize_instance(const Instance& inst);

enum class IngestMode { Strict, Trusted };

// {label, n, entries: [{l, q, chi: [n values]}], ramified_set, source}
struct EigenvalueTable {
    std::string label;
    std::size_t n = 0;
    std::vector<LocalEigenvalueData> entries;
    std::vector<Int> ramified_set;
    std::string source;
    std::vector<std::string> warnings;  // trusted mode: problems that strict mode rejects
};

EigenvalueTable eigenvalue_table_from_json(const Json& doc, IngestMode mode = IngestMode::Strict);
EigenvalueTable parse_eigenvalue_table(std::string_view bytes, IngestMode mode = IngestMode::Strict);
Json eigenvalue_table_to_json(const EigenvalueTable& t);

struct ResultRecord {
    std::string operation;
    Json parameters = Json::object();
    std::string input_digest;
    Json output = Json::object();

    Json to_json() const;
    // Indented, sorted keys, trailing newline.
    std::string serialize() const;
};

// Seeded synthetic system on Q^dim (dim <= 12). Operators are diagonal in a hidden
// basis and conjugated by a random unimodular matrix. With plant = p the lattice is
// glued along (e0 + e1)/p and the first two eigencharacters agree mod p, so the split
// {e0} | rest has congruence module Z/p. The pairing is the standard form carried
// along by the conjugation, and the dual lattice is included. Eigenvalues and the
// glue are recorded in metadata.generator.
Instance random_instance(std::uint64_t seed, std::size_t dim, std::size_t num_ops, std::optional<long> plant = std::nullopt);

}  // namespace ctk::io
