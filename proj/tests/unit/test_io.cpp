#include <gtest/gtest.h>

#include "ctk/congruence.hpp"
#include "ctk/io.hpp"
#include "ctk/modsym.hpp"
#include "oracles.hpp"

using namespace ctk;
using namespace ctk::io;

namespace {

std::string error_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const DomainError& e) {
        return e.what();
    }
    return "";
}

Instance level37() {
    Instance inst;
    inst.system = modsym::cuspidal_system(37, {2, 3, 5});
    inst.metadata = {{"level", 37}};
    return inst;
}

}  // namespace

TEST(Json, StrictParsing) {
    EXPECT_EQ(canonical_json(parse_json(R"({"b": 1, "a": [2, "x"]})")), R"({"a":[2,"x"],"b":1})");
    auto big = parse_json("[123456789012345678901234567890]");
    EXPECT_EQ(read_integer(big[0], "/0"), Int("123456789012345678901234567890"));
    EXPECT_NE(error_of([] { parse_json(R"({"a": [1, 0.5]})"); }).find("/a/1: floats forbidden"), std::string::npos);
    EXPECT_NE(error_of([] { parse_json("1e3"); }).find("floats forbidden"), std::string::npos);
    EXPECT_NE(error_of([] { parse_json(R"({"a": 1, "a": 2})"); }).find("/a: duplicate key"), std::string::npos);
    EXPECT_THROW(parse_json("{"), SchemaError);
    EXPECT_EQ(read_rational(Json("-3/6"), "/x"), make_rat(-1, 2));
    EXPECT_THROW(read_rational(Json("1/0"), "/x"), SchemaError);
    EXPECT_THROW(read_integer(Json(true), "/x"), SchemaError);
}

TEST(Json, Sha256) {
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(content_digest(parse_json(R"({"b":1,"a":2})")), content_digest(parse_json("{ \"a\" : 2,\n \"b\" : 1 }")));
}

TEST(Instance, Examples) {
    auto inst = parse_instance(R"({"dim": 1, "basis": [["1"]], "operators": [{"name": "T", "matrix": [[2]]}]})");
    EXPECT_EQ(inst.system.dim(), 1u);
    EXPECT_EQ(inst.system.operators()[0].label.name, "T");
    EXPECT_EQ(inst.system.operators()[0].matrix, IntMatrix::from_rows({{2}}));

    auto msg = error_of([] { parse_instance(R"({"dim": 1, "basis": [["1"]], "operators": [{"name": "T", "matrix": [[0.5]]}]})"); });
    EXPECT_NE(msg.find("floats forbidden"), std::string::npos);
    EXPECT_NE(msg.find("/operators/0/matrix/0/0"), std::string::npos);

    auto noncommuting = R"({"dim": 2, "basis": [[1,0],[0,1]], "operators": [
        {"name": "A", "matrix": [[0,1],[1,0]]}, {"name": "B", "matrix": [[1,1],[0,1]]}]})";
    EXPECT_NE(error_of([&] { parse_instance(noncommuting); }).find("do not commute"), std::string::npos);

    auto level = level37();
    auto back = parse_instance(serialize_instance(level));
    EXPECT_EQ(back, level);
    EXPECT_EQ(serialize_instance(back), serialize_instance(level));
}

TEST(Instance, SchemaErrors) {
    auto path_of = [](const std::string& text) {
        try {
            parse_instance(text);
        } catch (const SchemaError& e) {
            return e.path();
        }
        return std::string("<none>");
    };
    EXPECT_EQ(path_of(R"({"basis": [[1]], "operators": []})"), "/ambient_dim");
    EXPECT_EQ(path_of(R"({"dim": 1, "basis": [[1]], "operators": [], "extra": 1})"), "/extra");
    EXPECT_EQ(path_of(R"({"dim": 2, "basis": [[1, 2], [2, 4]], "operators": []})"), "/basis");
    EXPECT_EQ(path_of(R"({"dim": 2, "basis": [[1, 0], [0]], "operators": []})"), "/basis/1");
    EXPECT_EQ(path_of(R"({"dim": 1, "basis": [[1]], "operators": [{"name": "T", "matrix": [["1/2"]]}]})"), "/operators/0/matrix");
    EXPECT_EQ(path_of(R"({"dim": 1, "basis": [[1]], "operators": [{"matrix": [[1]]}]})"), "/operators/0/label");
    EXPECT_EQ(path_of(R"({"dim": 1, "basis": [[1]], "operators": [{"label": {"l": 0}, "matrix": [[1]]}]})"), "/operators/0/label/l");
    EXPECT_EQ(path_of(R"({"dim": 1, "basis": [[1]], "operators": [{"name": "T", "matrix": [[1]]}, {"name": "T", "matrix": [[2]]}]})"), "/operators");
    EXPECT_EQ(path_of(R"({"dim": 2, "basis": [[1, 0], [0, 1]], "pairing_gram": [[1, 1], [1, 1]], "operators": []})"), "/pairing_gram");
    EXPECT_EQ(path_of(R"([1])"), "/");
}

TEST(Instance, NonCanonicalBasisKeepsTheAction) {
    // Lattice spanned by (1,1), (0,2) with T swapping the two coordinates of the ambient space.
    RatMatrix Bg = RatMatrix::from_rows(std::vector<std::vector<Rat>>{{1, 1}, {0, 2}});
    RatMatrix swap = RatMatrix::from_rows(std::vector<std::vector<Rat>>{{0, 1}, {1, 0}});
    auto Tg = to_integer(Bg * swap * inverse(Bg));
    ASSERT_TRUE(Tg);
    Json doc = {{"ambient_dim", 2}, {"lattice_basis", to_json(Bg)}, {"operators", {{{"name", "S"}, {"matrix", to_json(*Tg)}}}}};
    auto inst = instance_from_json(doc);
    const auto& Bc = inst.system.lattice().basis();
    EXPECT_EQ(inverse(Bc) * to_rational(inst.system.operators()[0].matrix) * Bc, swap);
}

TEST(Instance, RandomRoundTrips) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::optional<long> plant;
        if (seed % 2) plant = std::vector<long>{2, 3, 5}[seed % 3];
        auto inst = random_instance(seed, 2 + seed % 6, 1 + seed % 3, plant);
        auto text = serialize_instance(inst);
        EXPECT_EQ(parse_instance(text), inst) << seed;
        EXPECT_EQ(serialize_instance(random_instance(seed, 2 + seed % 6, 1 + seed % 3, plant)), text);
        EXPECT_TRUE(is_perfect(inst.system.lattice(), *inst.dual_lattice, *inst.pairing)) << seed;
    }
    EXPECT_NE(error_of([] { random_instance(0, 13, 1); }).find("desk-scale bound"), std::string::npos);
    EXPECT_THROW(random_instance(0, 2, 1, 4), DomainError);
    EXPECT_NO_THROW(random_instance(0, 12, 2, 3));
}

TEST(Instance, PlantedSeedZero) {
    auto inst = random_instance(0, 2, 1, 2);
    auto comps = isotypic_decomposition(inst.system);
    ASSERT_EQ(comps.size(), 2u);
    const auto& gen = inst.metadata.at("generator").at("eigenvalues")[0];
    // The component carrying e0's eigenvalue in the hidden basis.
    Rat lambda0(std::stol(gen[0].get<std::string>()));
    std::size_t c0 = (*comps[0].rational_values())[0] == lambda0 ? 0 : 1;
    auto split = SplitDecomposition::from_projector(inst.system.to_ambient(comps[c0].projector), *inst.pairing);
    auto r = disc_equivalence(inst.system.lattice(), *inst.dual_lattice, *inst.pairing, split, 2);
    EXPECT_FALSE(r.excluded);
    EXPECT_TRUE(r.valuation_positive);
    EXPECT_TRUE(r.module_nontrivial_at_p);
    EXPECT_EQ(r.module.divisors, (std::vector<Int>{2}));
}

TEST(EigenvalueTable, Examples) {
    auto tau = oracle::ramanujan_tau(3);
    std::string delta = R"({"label": "Delta", "n": 2, "source": "q-expansion", "ramified_set": [],
        "entries": [{"l": 2, "q": 2, "chi": [")" + tau[2].get_str() + R"(", "1024"]},
                    {"l": 3, "q": 3, "chi": [")" + tau[3].get_str() + R"(", "59049"]}]})";
    auto t = parse_eigenvalue_table(delta);
    ASSERT_EQ(t.entries.size(), 2u);
    EXPECT_EQ(t.entries[0].chi[0], -24);
    EXPECT_EQ(t.entries[1].chi[0], 252);
    EXPECT_EQ(eigenvalue_table_from_json(eigenvalue_table_to_json(t)).entries[1].chi, t.entries[1].chi);

    auto empty = parse_eigenvalue_table(R"({"label": "E", "n": 2, "entries": []})");
    EXPECT_TRUE(empty.entries.empty());
    auto report = congruent_eigensystems(empty.entries, empty.entries, 5);
    EXPECT_TRUE(report.congruent);
    EXPECT_TRUE(report.tested_tags.empty());

    auto dup = R"({"label": "D", "n": 1, "entries": [{"l": 2, "q": 2, "chi": [1]}, {"l": 2, "q": 2, "chi": [1]}]})";
    EXPECT_NE(error_of([&] { parse_eigenvalue_table(dup); }).find("duplicate tag"), std::string::npos);
    auto desc = R"({"label": "D", "n": 1, "entries": [{"l": 3, "q": 3, "chi": [1]}, {"l": 2, "q": 2, "chi": [1]}]})";
    EXPECT_THROW(parse_eigenvalue_table(desc), SchemaError);
    auto short_chi = R"({"label": "D", "n": 2, "entries": [{"l": 2, "q": 2, "chi": [1]}]})";
    EXPECT_NE(error_of([&] { parse_eigenvalue_table(short_chi); }).find("/entries/0/chi"), std::string::npos);
    auto bad_q = R"({"label": "D", "n": 1, "entries": [{"l": 2, "q": 6, "chi": [1]}]})";
    EXPECT_THROW(parse_eigenvalue_table(bad_q, IngestMode::Strict), SchemaError);
    auto trusted = parse_eigenvalue_table(bad_q, IngestMode::Trusted);
    ASSERT_EQ(trusted.warnings.size(), 1u);
    EXPECT_NE(trusted.warnings[0].find("not a prime power"), std::string::npos);
    auto ramified = R"({"label": "D", "n": 1, "ramified_set": [2], "entries": [{"l": 2, "q": 2, "chi": [1]}]})";
    EXPECT_THROW(parse_eigenvalue_table(ramified), SchemaError);
}

TEST(ResultRecord, Deterministic) {
    ResultRecord r{"snf", {{"matrix", "[[2,4],[6,8]]"}}, sha256_hex("x"), {{"diagonal", {"2", "4"}}}};
    auto a = r.serialize();
    EXPECT_EQ(a, r.serialize());
    auto j = parse_json(a);
    EXPECT_EQ(j.at("toolkit_version"), kToolkitVersion);
    EXPECT_EQ(j.at("operation"), "snf");
    EXPECT_LT(a.find("\"input_digest\""), a.find("\"operation\""));  // sorted keys
}
