#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "ctk/io.hpp"

using ctk::io::Json;

namespace {

struct Run {
    int code;
    std::string out, err;
    Json json() const { return ctk::io::parse_json(out); }
};

Run ctk_run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code = ctk::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "ctk_cli_test";
    std::filesystem::create_directories(dir);
    return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) { std::ofstream(p) << text; }

}  // namespace

TEST(Cli, Snf) {
    auto r = ctk_run({"snf", "--matrix", "[[2,4],[6,8]]"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    EXPECT_EQ(j["operation"], "snf");
    EXPECT_EQ(j["output"]["diagonal"], Json::parse(R"(["2","4"])"));
    EXPECT_EQ(j["output"]["rank"], 2);
    auto file = scratch("m.json");
    write(file, "[[2, 4],\n [6, 8]]");
    auto from_file = ctk_run({"snf", "--in", file.string()});
    EXPECT_EQ(from_file.out, r.out);  // same parsed content, same digest
}

TEST(Cli, Criticality) {
    auto r = ctk_run({"criticality", "--n", "2", "--signature", "1,0", "--weights", "l1=4"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["output"]["critical"], true);
    EXPECT_NE(r.out.find("\"critical\": true"), std::string::npos);
    auto imag_quad = ctk_run({"criticality", "--n", "2", "--signature", "0,1"});
    ASSERT_EQ(imag_quad.code, 0) << imag_quad.err;
    EXPECT_EQ(imag_quad.json()["output"]["critical"], false);
    EXPECT_EQ(ctk_run({"criticality", "--n", "2", "--signature", "1"}).code, 2);
    EXPECT_EQ(ctk_run({"criticality", "--n", "2", "--signature", "0,0"}).code, 1);
}

TEST(Cli, DetectLevel37) {
    auto r = ctk_run({"detect", "--instance", "level37", "--prime", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto out = r.json()["output"];
    EXPECT_EQ(out["verdict"], "congruent");
    ASSERT_EQ(out["pairs"].size(), 1u);
    EXPECT_EQ(out["pairs"][0]["strong"], true);
    EXPECT_EQ(ctk_run({"detect", "--instance", "level37", "--prime", "3"}).json()["output"]["verdict"], "not-congruent");
}

TEST(Cli, ModsymFeedsInstanceCommands) {
    auto file = scratch("level11.json");
    auto r = ctk_run({"modsym", "--level", "11", "--hecke", "2,3,5", "--out", file.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    auto rec = ctk::io::parse_json(ss.str());
    EXPECT_EQ(rec["output"]["cuspidal_rank"], 2);
    EXPECT_EQ(rec["output"]["charpolys"]["2"], "x^2 + 4*x + 4");

    auto dual = ctk_run({"lattice-dual", "--instance", file.string()});
    ASSERT_EQ(dual.code, 0) << dual.err;
    EXPECT_EQ(dual.json()["output"]["perfect"], true);
    // One rational newform: a single component, so detect never finds a pair.
    auto det = ctk_run({"detect", "--instance", file.string(), "--prime", "5"});
    ASSERT_EQ(det.code, 0) << det.err;
    EXPECT_EQ(det.json()["output"]["verdict"], "not-congruent");
    EXPECT_EQ(det.json()["input_digest"], ctk::io::content_digest(rec["output"]["instance"]));
    EXPECT_EQ(ctk_run({"modsym", "--level", "11", "--hecke", "11"}).code, 1);
}

TEST(Cli, PlantedPipeline) {
    auto file = scratch("planted.json");
    ASSERT_EQ(ctk_run({"gen", "--seed", "0", "--dim", "2", "--ops", "1", "--plant", "2", "--out", file.string()}).code, 0);
    auto det = ctk_run({"detect", "--instance", file.string(), "--prime", "2"});
    ASSERT_EQ(det.code, 0) << det.err;
    EXPECT_EQ(det.json()["output"]["verdict"], "congruent");

    auto cm = ctk_run({"congruence-module", "--instance", file.string(), "--split", "0"});
    ASSERT_EQ(cm.code, 0) << cm.err;
    EXPECT_EQ(cm.json()["output"]["module"]["divisors"], Json::parse(R"(["2"])"));
    EXPECT_EQ(cm.json()["output"]["quotients_isomorphic"], true);

    auto de = ctk_run({"disc-equiv", "--instance", file.string(), "--split", "0", "--prime", "2"});
    ASSERT_EQ(de.code, 0) << de.err;
    EXPECT_EQ(de.json()["output"]["agree"], true);
    EXPECT_EQ(de.json()["output"]["valuation_positive"], true);
    EXPECT_EQ(ctk_run({"disc-equiv", "--instance", file.string(), "--split", "0", "--prime", "4"}).code, 1);
    EXPECT_EQ(ctk_run({"congruence-module", "--instance", file.string(), "--split", "7"}).code, 1);
}

TEST(Cli, Satake) {
    auto a = scratch("a.json"), b = scratch("b.json");
    write(a, R"({"label": "A", "n": 1, "entries": [{"l": 2, "q": 2, "chi": [3]}, {"l": 3, "q": 3, "chi": [4]}]})");
    write(b, R"({"label": "B", "n": 1, "entries": [{"l": 2, "q": 2, "chi": [8]}, {"l": 3, "q": 3, "chi": [9]}]})");
    auto r = ctk_run({"satake", "--table-a", a.string(), "--table-b", b.string(), "--prime", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["output"]["congruent"], true);
    auto at7 = ctk_run({"satake", "--table-a", a.string(), "--table-b", b.string(), "--prime", "7"});
    EXPECT_EQ(at7.json()["output"]["congruent"], false);
    auto excl = ctk_run({"satake", "--table-a", a.string(), "--table-b", b.string(), "--prime", "7", "--exclude", "2,3"});
    EXPECT_EQ(excl.json()["output"]["congruent"], true);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(ctk_run({}).code, 2);
    EXPECT_EQ(ctk_run({"frobnicate"}).code, 2);
    EXPECT_EQ(ctk_run({"detect", "--prime", "2"}).code, 2);
    EXPECT_EQ(ctk_run({"detect", "--instance", "level37", "--prime", "two"}).code, 2);
    EXPECT_EQ(ctk_run({"lattice-dual", "--instance", "level37", "--side", "middle"}).code, 2);
    EXPECT_EQ(ctk_run({"snf", "--matrix", "[[1,2],[3]]"}).code, 1);
    EXPECT_EQ(ctk_run({"snf", "--matrix", "{"}).code, 1);
    EXPECT_EQ(ctk_run({"gen", "--seed", "1", "--dim", "13", "--ops", "1"}).code, 1);
    auto help = ctk_run({"--help"});
    EXPECT_EQ(help.code, 0);
    EXPECT_NE(help.out.find("detect"), std::string::npos);
    auto bad = scratch("bad.json");
    write(bad, R"({"dim": 1, "basis": [["1"]], "operators": [{"name": "T", "matrix": [[0.5]]}]})");
    auto r = ctk_run({"detect", "--instance", bad.string(), "--prime", "2"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("/operators/0/matrix/0/0: floats forbidden"), std::string::npos);
}

TEST(Cli, Deterministic) {
    std::vector<std::vector<std::string>> calls = {
        {"snf", "--matrix", "[[2,4],[6,8]]"},
        {"detect", "--instance", "level37", "--prime", "2", "--orbit-grouping", "galois"},
        {"modsym", "--level", "23"},
        {"gen", "--seed", "7", "--dim", "4", "--ops", "2", "--plant", "3"},
        {"criticality", "--n", "3", "--signature", "2,1"},
    };
    for (const auto& c : calls) {
        auto first = ctk_run(c), second = ctk_run(c);
        EXPECT_EQ(first.code, 0) << c[0] << ": " << first.err;
        EXPECT_EQ(first.out, second.out) << c[0];
    }
}
