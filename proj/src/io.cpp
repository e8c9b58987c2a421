#include "ctk/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <random>
#include <set>

#include "ctk/errors.hpp"

namespace ctk::io {

namespace {

std::string pointer_escape(const std::string& key) {
    std::string out;
    for (char c : key) {
        if (c == '~') out += "~0";
        else if (c == '/') out += "~1";
        else out += c;
    }
    return out;
}

bool integer_literal(const std::string& s) {
    std::size_t i = s[0] == '-' ? 1 : 0;
    return i < s.size() && std::all_of(s.begin() + static_cast<long>(i), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

// DOM builder that tracks the JSON pointer of the value being read.
class StrictBuilder : public nlohmann::json_sax<Json> {
public:
    Json root;

    bool null() override { return put(Json(nullptr)); }
    bool boolean(bool v) override { return put(Json(v)); }
    bool number_integer(number_integer_t v) override { return put(Json(v)); }
    bool number_unsigned(number_unsigned_t v) override { return put(Json(v)); }
    bool number_float(number_float_t, const string_t& s) override {
        if (integer_literal(s)) return put(Json(s));
        throw SchemaError(here(), "floats forbidden (got " + s + ")");
    }
    bool string(string_t& v) override { return put(Json(v)); }
    bool binary(binary_t&) override { throw SchemaError(here(), "binary values are not supported"); }

    bool start_object(std::size_t) override {
        frames_.push_back({Json::object(), {}, true});
        return true;
    }
    bool key(string_t& k) override {
        auto& f = frames_.back();
        if (f.value.contains(k)) throw SchemaError(here() + "/" + pointer_escape(k), "duplicate key");
        f.key = k;
        return true;
    }
    bool end_object() override { return close(); }
    bool start_array(std::size_t) override {
        frames_.push_back({Json::array(), {}, false});
        return true;
    }
    bool end_array() override { return close(); }

    bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& ex) override {
        throw SchemaError("", "invalid JSON at byte " + std::to_string(position) + ": " + ex.what());
    }

private:
    struct Frame {
        Json value;
        std::string key;
        bool object;
    };
    std::vector<Frame> frames_;

    std::string here() const {
        std::string p;
        for (const auto& f : frames_) p += "/" + (f.object ? pointer_escape(f.key) : std::to_string(f.value.size()));
        return p;
    }
    bool put(Json v) {
        if (frames_.empty()) {
            root = std::move(v);
            return true;
        }
        auto& f = frames_.back();
        if (f.object) f.value[f.key] = std::move(v);
        else f.value.push_back(std::move(v));
        return true;
    }
    bool close() {
        Json v = std::move(frames_.back().value);
        frames_.pop_back();
        return put(std::move(v));
    }
};

const Json& field(const Json& obj, const std::string& path, std::initializer_list<const char*> names, bool required = true) {
    static const Json missing;
    for (const char* n : names)
        if (obj.contains(n)) return obj.at(n);
    if (required) throw SchemaError(path + "/" + *names.begin(), "missing field");
    return missing;
}

void reject_unknown(const Json& obj, const std::string& path, const std::set<std::string>& allowed) {
    for (const auto& [k, v] : obj.items())
        if (!allowed.count(k)) throw SchemaError(path + "/" + pointer_escape(k), "unknown field");
}

void expect_object(const Json& j, const std::string& path) {
    if (!j.is_object()) throw SchemaError(path.empty() ? "/" : path, "expected an object");
}

std::string read_string(const Json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

std::size_t read_count(const Json& j, const std::string& path) {
    Int v = read_integer(j, path);
    if (v < 0 || v > 1'000'000) throw SchemaError(path, "expected a small nonnegative integer");
    return v.get_ui();
}

template <class T>
Matrix<T> read_matrix(const Json& j, const std::string& path, std::optional<std::size_t> cols,
                      T (*read)(const Json&, const std::string&)) {
    if (!j.is_array()) throw SchemaError(path, "expected an array of rows");
    std::vector<std::vector<T>> rows;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string rp = path + "/" + std::to_string(i);
        if (!j[i].is_array()) throw SchemaError(rp, "expected a row array");
        std::vector<T> row;
        for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(read(j[i][k], rp + "/" + std::to_string(k)));
        if (!rows.empty() && row.size() != rows[0].size()) throw SchemaError(rp, "ragged matrix");
        if (cols && row.size() != *cols)
            throw SchemaError(rp, "expected " + std::to_string(*cols) + " entries, got " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    return Matrix<T>::from_rows(rows, cols.value_or(0));
}

Int read_integer_fn(const Json& j, const std::string& path) { return read_integer(j, path); }
Rat read_rational_fn(const Json& j, const std::string& path) { return read_rational(j, path); }

Lattice read_lattice(const Json& j, const std::string& path, std::size_t n, RatMatrix* given = nullptr) {
    RatMatrix B = read_rational_matrix(j, path, n);
    if (rank(B) != B.rows()) throw SchemaError(path, "basis rows are linearly dependent");
    if (given) *given = B;
    return Lattice::from_basis(B);
}

OperatorLabel read_label(const Json& op, const std::string& path) {
    const Json* lab = op.contains("label") ? &op.at("label") : nullptr;
    if (op.contains("name")) {
        if (lab) throw SchemaError(path + "/name", "give either label or name");
        return OperatorLabel::named(read_string(op.at("name"), path + "/name"));
    }
    if (!lab) throw SchemaError(path + "/label", "missing field");
    const std::string lp = path + "/label";
    expect_object(*lab, lp);
    if (lab->contains("name")) {
        reject_unknown(*lab, lp, {"name"});
        return OperatorLabel::named(read_string(lab->at("name"), lp + "/name"));
    }
    reject_unknown(*lab, lp, {"l", "j"});
    Int l = read_integer(field(*lab, lp, {"l"}), lp + "/l");
    Int jv = lab->contains("j") ? read_integer(lab->at("j"), lp + "/j") : Int(1);
    if (l < 1 || !l.fits_slong_p()) throw SchemaError(lp + "/l", "tag must be a positive integer");
    if (jv < 1 || !jv.fits_slong_p()) throw SchemaError(lp + "/j", "index must be a positive integer");
    return OperatorLabel::tagged(l.get_si(), jv.get_si());
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t n) { return rng() % n; }
long draw_in(std::mt19937_64& rng, long lo, long hi) { return lo + static_cast<long>(draw(rng, static_cast<std::uint64_t>(hi - lo + 1))); }

}  // namespace

Json parse_json(std::string_view text) {
    StrictBuilder b;
    Json::sax_parse(text.begin(), text.end(), &b);
    return std::move(b.root);
}

std::string canonical_json(const Json& j) { return j.dump(); }

std::string sha256_hex(std::string_view bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("SHA-256 failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 15];
    }
    return out;
}

std::string content_digest(const Json& j) { return sha256_hex(canonical_json(j)); }

Int read_integer(const Json& j, const std::string& path) {
    if (j.is_number_unsigned()) return Int(std::to_string(j.get<std::uint64_t>()));
    if (j.is_number_integer()) return Int(std::to_string(j.get<std::int64_t>()));
    if (j.is_string()) {
        try {
            return parse_integer(j.get<std::string>());
        } catch (const DomainError& e) {
            throw SchemaError(path, e.what());
        }
    }
    if (j.is_number_float()) throw SchemaError(path, "floats forbidden");
    throw SchemaError(path, "expected an integer");
}

Rat read_rational(const Json& j, const std::string& path) {
    if (j.is_string()) {
        try {
            return parse_rational(j.get<std::string>());
        } catch (const DomainError& e) {
            throw SchemaError(path, e.what());
        }
    }
    if (j.is_number_integer()) return Rat(read_integer(j, path));
    if (j.is_number_float()) throw SchemaError(path, "floats forbidden");
    throw SchemaError(path, "expected a rational number");
}

RatMatrix read_rational_matrix(const Json& j, const std::string& path, std::optional<std::size_t> cols) {
    return read_matrix<Rat>(j, path, cols, &read_rational_fn);
}

IntMatrix read_integer_matrix(const Json& j, const std::string& path, std::optional<std::size_t> cols) {
    return read_matrix<Int>(j, path, cols, &read_integer_fn);
}

Json to_json(const Int& x) { return to_string(x); }
Json to_json(const Rat& x) { return to_string(x); }

Json to_json(const IntMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
        out.push_back(std::move(row));
    }
    return out;
}

Json to_json(const RatMatrix& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(to_string(m(i, k)));
        out.push_back(std::move(row));
    }
    return out;
}

BilinearPairing Instance::pairing_or_standard() const {
    return pairing ? *pairing : BilinearPairing::standard(system.lattice().ambient_dim());
}

Lattice Instance::dual_or_computed() const {
    return dual_lattice ? *dual_lattice : dual_lattice_left(system.lattice(), pairing_or_standard());
}

bool operator==(const Instance& a, const Instance& b) {
    auto gram = [](const Instance& x) { return x.pairing ? std::optional<RatMatrix>(x.pairing->gram) : std::nullopt; };
    return a.system == b.system && a.dual_lattice == b.dual_lattice && gram(a) == gram(b) && a.metadata == b.metadata;
}

Instance instance_from_json(const Json& doc) {
    expect_object(doc, "");
    reject_unknown(doc, "", {"ambient_dim", "dim", "lattice_basis", "basis", "dual_lattice_basis", "pairing_gram",
                             "operators", "metadata"});
    if (doc.contains("dim") && doc.contains("ambient_dim")) throw SchemaError("/dim", "give either dim or ambient_dim");
    if (doc.contains("basis") && doc.contains("lattice_basis")) throw SchemaError("/basis", "give either basis or lattice_basis");
    const std::string dim_path = doc.contains("dim") ? "/dim" : "/ambient_dim";
    const std::string basis_path = doc.contains("basis") ? "/basis" : "/lattice_basis";
    const std::size_t n = read_count(field(doc, "", {"ambient_dim", "dim"}), dim_path);

    RatMatrix given;
    Lattice L = read_lattice(field(doc, "", {"lattice_basis", "basis"}), basis_path, n, &given);
    const std::size_t r = L.rank();
    // Operators are written against the given basis; move them to the canonical one.
    RatMatrix W = r ? *solve_left(given, L.basis()) : RatMatrix(0, 0);
    RatMatrix Winv = r ? inverse(W) : RatMatrix(0, 0);

    const Json& ops_json = field(doc, "", {"operators"});
    if (!ops_json.is_array()) throw SchemaError("/operators", "expected an array");
    std::vector<HeckeOperator> ops;
    for (std::size_t i = 0; i < ops_json.size(); ++i) {
        const std::string path = "/operators/" + std::to_string(i);
        const Json& op = ops_json[i];
        expect_object(op, path);
        reject_unknown(op, path, {"label", "name", "matrix", "normalization_exponent"});
        HeckeOperator h;
        h.label = read_label(op, path);
        RatMatrix m = read_rational_matrix(field(op, path, {"matrix"}), path + "/matrix", r);
        if (m.rows() != r) throw SchemaError(path + "/matrix", "expected a " + std::to_string(r) + "x" + std::to_string(r) + " matrix");
        if (!to_integer(m)) throw SchemaError(path + "/matrix", "entries must be integers (operator must preserve the lattice)");
        auto canon = to_integer(W * m * Winv);
        if (!canon) throw std::logic_error("basis change is not unimodular");
        h.matrix = *canon;
        if (op.contains("normalization_exponent"))
            h.normalization_exponent = read_rational(op.at("normalization_exponent"), path + "/normalization_exponent");
        ops.push_back(std::move(h));
    }

    Instance inst;
    try {
        inst.system = HeckeSystem(L, std::move(ops));
    } catch (const SchemaError&) {
        throw;
    } catch (const DomainError& e) {
        throw SchemaError("/operators", e.what());
    }
    if (!check_commuting(inst.system)) throw DomainError("operators do not commute");

    if (doc.contains("pairing_gram")) {
        RatMatrix G = read_rational_matrix(doc.at("pairing_gram"), "/pairing_gram", n);
        if (G.rows() != n) throw SchemaError("/pairing_gram", "expected a square matrix of size " + std::to_string(n));
        if (rank(G) != n) throw SchemaError("/pairing_gram", "pairing is degenerate");
        inst.pairing = BilinearPairing{G};
    }
    if (doc.contains("dual_lattice_basis")) {
        inst.dual_lattice = read_lattice(doc.at("dual_lattice_basis"), "/dual_lattice_basis", n);
        if (inst.dual_lattice->rank() != r) throw SchemaError("/dual_lattice_basis", "rank differs from the lattice's");
    }
    if (doc.contains("metadata")) {
        expect_object(doc.at("metadata"), "/metadata");
        inst.metadata = doc.at("metadata");
    }
    return inst;
}

Instance parse_instance(std::string_view bytes) { return instance_from_json(parse_json(bytes)); }

Json instance_to_json(const Instance& inst) {
    Json doc;
    const auto& L = inst.system.lattice();
    doc["ambient_dim"] = L.ambient_dim();
    doc["lattice_basis"] = to_json(L.basis());
    Json ops = Json::array();
    for (const auto& op : inst.system.operators()) {
        Json o;
        if (op.label.is_tagged()) o["label"] = {{"l", *op.label.l}, {"j", op.label.j.value_or(1)}};
        else o["label"] = {{"name", op.label.name}};
        o["matrix"] = to_json(op.matrix);
        if (op.normalization_exponent) o["normalization_exponent"] = to_json(*op.normalization_exponent);
        ops.push_back(std::move(o));
    }
    doc["operators"] = std::move(ops);
    if (inst.pairing) doc["pairing_gram"] = to_json(inst.pairing->gram);
    if (inst.dual_lattice) doc["dual_lattice_basis"] = to_json(inst.dual_lattice->basis());
    doc["metadata"] = inst.metadata;
    return doc;
}

std::string serialize_instance(const Instance& inst) { return instance_to_json(inst).dump(2) + "\n"; }

EigenvalueTable eigenvalue_table_from_json(const Json& doc, IngestMode mode) {
    expect_object(doc, "");
    reject_unknown(doc, "", {"label", "n", "entries", "ramified_set", "source"});
    EigenvalueTable t;
    t.label = read_string(field(doc, "", {"label"}), "/label");
    t.n = read_count(field(doc, "", {"n"}), "/n");
    if (doc.contains("source")) t.source = read_string(doc.at("source"), "/source");
    if (doc.contains("ramified_set")) {
        const Json& rs = doc.at("ramified_set");
        if (!rs.is_array()) throw SchemaError("/ramified_set", "expected an array");
        for (std::size_t i = 0; i < rs.size(); ++i) t.ramified_set.push_back(read_integer(rs[i], "/ramified_set/" + std::to_string(i)));
        std::sort(t.ramified_set.begin(), t.ramified_set.end());
        t.ramified_set.erase(std::unique(t.ramified_set.begin(), t.ramified_set.end()), t.ramified_set.end());
    }
    const Json& entries = field(doc, "", {"entries"});
    if (!entries.is_array()) throw SchemaError("/entries", "expected an array");
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const std::string path = "/entries/" + std::to_string(i);
        const Json& e = entries[i];
        expect_object(e, path);
        reject_unknown(e, path, {"l", "q", "chi"});
        LocalEigenvalueData d;
        d.tag = read_integer(field(e, path, {"l"}), path + "/l");
        d.q = read_integer(field(e, path, {"q"}), path + "/q");
        if (d.tag < 2) throw SchemaError(path + "/l", "tag must be at least 2");
        if (d.q < 2) throw SchemaError(path + "/q", "residue field size must be at least 2");
        if (!t.entries.empty() && d.tag == t.entries.back().tag) throw SchemaError(path + "/l", "duplicate tag " + to_string(d.tag));
        if (!t.entries.empty() && d.tag < t.entries.back().tag) throw SchemaError(path + "/l", "tags must be strictly increasing");
        if (std::binary_search(t.ramified_set.begin(), t.ramified_set.end(), d.tag))
            throw SchemaError(path + "/l", "tag " + to_string(d.tag) + " is listed as ramified");
        if (!is_prime_power(d.q)) {
            std::string msg = "q = " + to_string(d.q) + " is not a prime power";
            if (mode == IngestMode::Strict) throw SchemaError(path + "/q", msg);
            t.warnings.push_back(path + "/q: " + msg);
        }
        const Json& chi = field(e, path, {"chi"});
        if (!chi.is_array()) throw SchemaError(path + "/chi", "expected an array");
        if (chi.size() != t.n)
            throw SchemaError(path + "/chi", "expected " + std::to_string(t.n) + " values, got " + std::to_string(chi.size()));
        for (std::size_t j = 0; j < chi.size(); ++j) d.chi.push_back(read_rational(chi[j], path + "/chi/" + std::to_string(j)));
        t.entries.push_back(std::move(d));
    }
    return t;
}

EigenvalueTable parse_eigenvalue_table(std::string_view bytes, IngestMode mode) {
    return eigenvalue_table_from_json(parse_json(bytes), mode);
}

Json eigenvalue_table_to_json(const EigenvalueTable& t) {
    Json doc;
    doc["label"] = t.label;
    doc["n"] = t.n;
    doc["source"] = t.source;
    Json rs = Json::array();
    for (const auto& r : t.ramified_set) rs.push_back(to_json(r));
    doc["ramified_set"] = std::move(rs);
    Json entries = Json::array();
    for (const auto& e : t.entries) {
        Json chi = Json::array();
        for (const auto& c : e.chi) chi.push_back(to_json(c));
        entries.push_back({{"l", to_json(e.tag)}, {"q", to_json(e.q)}, {"chi", std::move(chi)}});
    }
    doc["entries"] = std::move(entries);
    return doc;
}

Json ResultRecord::to_json() const {
    return {{"operation", operation},
            {"parameters", parameters},
            {"input_digest", input_digest},
            {"output", output},
            {"toolkit_version", kToolkitVersion}};
}

std::string ResultRecord::serialize() const { return to_json().dump(2) + "\n"; }

Instance random_instance(std::uint64_t seed, std::size_t dim, std::size_t num_ops, std::optional<long> plant) {
    if (dim == 0) throw DomainError("dim must be positive");
    if (dim > 12) throw DomainError("dim " + std::to_string(dim) + " exceeds the desk-scale bound of 12");
    if (num_ops == 0 || num_ops > 12) throw DomainError("number of operators must be between 1 and 12");
    if (plant) {
        if (!is_prime(Int(*plant))) throw DomainError("planted modulus " + std::to_string(*plant) + " is not prime");
        if (dim < 2) throw DomainError("a planted congruence needs dim >= 2");
        if (*plant > 1000) throw DomainError("planted prime exceeds the desk-scale bound of 1000");
    }
    std::mt19937_64 rng(seed);
    const std::size_t d = dim;

    std::vector<std::vector<long>> eig(num_ops, std::vector<long>(d));
    for (auto& row : eig)
        for (auto& x : row) x = draw_in(rng, -6, 6);
    if (plant) {
        std::vector<long> r(num_ops);
        for (auto& x : r) x = draw_in(rng, -2, 2);
        if (std::all_of(r.begin(), r.end(), [](long x) { return x == 0; })) r[0] = 1;
        for (std::size_t i = 0; i < num_ops; ++i) eig[i][1] = eig[i][0] + *plant * r[i];
    }

    // Hidden coordinates: L0 = Z^d (+ Z (e0 + e1)/p) and its standard dual.
    RatMatrix L0 = RatMatrix::identity(d), M0 = RatMatrix::identity(d);
    if (plant) {
        L0(0, 0) = make_rat(1, *plant);
        L0(0, 1) = make_rat(1, *plant);
        M0(0, 0) = *plant;
        M0(1, 0) = -1;
    }

    IntMatrix U = IntMatrix::identity(d);
    for (std::size_t t = 0; d > 1 && t < 3 * d; ++t) {
        std::size_t i = draw(rng, d), j = draw(rng, d - 1);
        if (j >= i) ++j;
        long c = draw_in(rng, 1, 2) * (draw(rng, 2) ? 1 : -1);
        for (std::size_t k = 0; k < d; ++k) U(i, k) += c * U(j, k);
    }
    RatMatrix Uq = to_rational(U), Uinv = inverse(Uq);

    Lattice L = Lattice::from_basis(L0 * Uq);
    const RatMatrix& B = L.basis();
    RatMatrix Binv = inverse(B);
    std::vector<HeckeOperator> ops;
    static const long tags[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    for (std::size_t i = 0; i < num_ops; ++i) {
        std::vector<Rat> diag(eig[i].begin(), eig[i].end());
        RatMatrix A = Uinv * RatMatrix::diagonal(diag) * Uq;
        auto T = to_integer(B * A * Binv);
        if (!T) throw std::logic_error("generated operator does not preserve the lattice");
        ops.push_back({OperatorLabel::tagged(tags[i], 1), *T, std::nullopt});
    }

    Instance inst;
    inst.system = HeckeSystem(L, std::move(ops));
    inst.pairing = BilinearPairing{Uinv * Uinv.transpose()};
    inst.dual_lattice = Lattice::from_basis(M0 * Uq);

    Json eigj = Json::array();
    for (const auto& row : eig) {
        Json r = Json::array();
        for (long x : row) r.push_back(std::to_string(x));
        eigj.push_back(std::move(r));
    }
    Json gen = {{"seed", std::to_string(seed)}, {"dim", d}, {"ops", num_ops}, {"eigenvalues", std::move(eigj)},
                {"basis_change", to_json(U)}};
    gen["plant"] = plant ? Json(std::to_string(*plant)) : Json(nullptr);
    inst.metadata = {{"generator", std::move(gen)}};
    return inst;
}

}  // namespace ctk::io
