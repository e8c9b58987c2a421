#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "CLI11.hpp"

#include "ctk/criticality.hpp"
#include "ctk/detect.hpp"
#include "ctk/io.hpp"
#include "ctk/linalg.hpp"
#include "ctk/modsym.hpp"

namespace ctk::cli {

namespace {

using io::Json;

// Bad flag values found after CLI11 is done; reported with exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Json ints(const std::vector<Int>& v) {
    Json a = Json::array();
    for (const auto& x : v) a.push_back(io::to_json(x));
    return a;
}

Json module_json(const CongruenceModule& m) {
    return {{"divisors", ints(m.divisors)}, {"order", io::to_json(m.order)}, {"support", ints(m.support)}};
}

Json factor_strings(const IsotypicComponent& c) {
    Json a = Json::array();
    for (std::size_t g = 0; g < c.factors.size(); ++g) {
        std::string f = "(" + to_string(c.factors[g]) + ")";
        if (c.exponents[g] > 1) f += "^" + std::to_string(c.exponents[g]);
        a.push_back(f);
    }
    return a;
}

Json values_json(const std::optional<std::vector<Rat>>& values) {
    if (!values) return nullptr;
    Json a = Json::array();
    for (const auto& v : *values) a.push_back(io::to_json(v));
    return a;
}

Json component_json(const IsotypicComponent& c) {
    return {{"dim", c.dim()},
            {"orbit_size", c.orbit_size},
            {"semisimple", c.semisimple},
            {"factors", factor_strings(c)},
            {"values", values_json(c.rational_values())}};
}

struct LoadedInstance {
    io::Instance inst;
    std::string digest;
};

HeckeSystem builtin_level(long N) {
    std::vector<long> primes;
    for (long l = 2; l <= 20; ++l)
        if (is_prime(Int(l)) && N % l != 0) primes.push_back(l);
    return modsym::cuspidal_system(N, primes);
}

// A file holding an instance or a ResultRecord that carries one in output.instance.
// "levelN" with no such file is the weight-2 cuspidal system of level N.
LoadedInstance load_instance(const std::string& arg) {
    static const std::regex builtin(R"(level([1-9][0-9]{0,5}))");
    std::smatch m;
    if (!std::filesystem::exists(arg) && std::regex_match(arg, m, builtin)) {
        long N = std::stol(m[1]);
        io::Instance inst;
        inst.system = builtin_level(N);
        inst.metadata = {{"source", "modular-symbols"}, {"level", N}, {"weight", 2}};
        return {inst, io::content_digest(io::instance_to_json(inst))};
    }
    Json doc = io::parse_json(read_file(arg));
    if (doc.is_object() && doc.contains("operation") && doc.contains("output") && doc["output"].is_object() &&
        doc["output"].contains("instance"))
        doc = doc["output"]["instance"];
    return {io::instance_from_json(doc), io::content_digest(doc)};
}

SplitDecomposition ambient_split(const io::Instance& inst, const std::vector<std::size_t>& selection,
                                 ProjectorPair* lattice_projectors = nullptr) {
    auto comps = isotypic_decomposition(inst.system);
    for (auto i : selection)
        if (i >= comps.size())
            throw DomainError("component " + std::to_string(i) + " out of range (" + std::to_string(comps.size()) +
                              " components)");
    auto pp = projector_pair(comps, selection);
    if (lattice_projectors) *lattice_projectors = pp;
    return SplitDecomposition::from_projector(inst.system.to_ambient(pp.e1), inst.pairing_or_standard());
}

Json components_json(const HeckeSystem& H) {
    Json a = Json::array();
    for (const auto& c : isotypic_decomposition(H)) a.push_back(component_json(c));
    return a;
}

struct Options {
    std::string out;
    // snf
    std::string matrix, in;
    // instance-based
    std::string instance, side = "left", grouping = "none";
    std::vector<std::size_t> split;
    std::int64_t prime = 0;
    std::optional<unsigned> ext_degree;
    // modsym
    long level = 0;
    std::vector<long> hecke;
    std::string heilbronn = "cremona";
    // satake
    std::string table_a, table_b;
    std::vector<std::int64_t> exclude;
    bool trusted = false;
    // criticality
    unsigned n = 0;
    std::string signature, weights;
    // gen
    std::uint64_t seed = 0;
    std::size_t dim = 0, ops = 0;
    std::optional<long> plant;
};

io::ResultRecord do_snf(const Options& o) {
    if (o.matrix.empty() == o.in.empty()) throw UsageError("snf needs exactly one of --matrix or --in");
    Json doc = io::parse_json(o.matrix.empty() ? read_file(o.in) : o.matrix);
    IntMatrix A = io::read_integer_matrix(doc, "");
    auto s = snf(A);
    Json out = {{"U", io::to_json(s.U)},
                {"D", io::to_json(s.D)},
                {"V", io::to_json(s.V)},
                {"diagonal", ints(s.diagonal())},
                {"invariant_factors", ints(s.invariant_factors())},
                {"rank", s.rank}};
    return {"snf", Json::object(), io::content_digest(doc), out};
}

io::ResultRecord do_lattice_dual(const Options& o) {
    auto [inst, digest] = load_instance(o.instance);
    const Lattice& L = inst.system.lattice();
    auto pairing = inst.pairing_or_standard();
    Json out;
    if (o.side == "left") {
        Lattice M = dual_lattice_left(L, pairing);
        out = {{"basis", io::to_json(M.basis())},
               {"discriminant", io::to_json(discriminant(L, M, pairing))},
               {"perfect", is_perfect(L, M, pairing)}};
        if (inst.dual_lattice) out["matches_given_dual"] = *inst.dual_lattice == M;
    } else {
        Lattice M = dual_lattice(L, pairing);
        out = {{"basis", io::to_json(M.basis())},
               {"discriminant", io::to_json(discriminant(M, L, pairing))},
               {"perfect", is_perfect(M, L, pairing)}};
    }
    out["rank"] = L.rank();
    out["pairing"] = inst.pairing ? "given" : "standard";
    return {"lattice-dual", {{"side", o.side}}, digest, out};
}

io::ResultRecord do_congruence_module(const Options& o) {
    auto [inst, digest] = load_instance(o.instance);
    ProjectorPair pp;
    auto split = ambient_split(inst, o.split, &pp);
    auto parts = congruence_module_parts(inst.system.lattice(), split);
    auto Q = hecke_congruence_module(inst.system, pp.e1, pp.e2);
    bool strong = std::all_of(parts.module.support.begin(), parts.module.support.end(),
                              [&](const Int& q) { return Q.supported_at(q); });
    Json out = {{"components", components_json(inst.system)},
                {"module", module_json(parts.module)},
                {"quotients",
                 {{"sum_over_L", ints(parts.sum_over_L)},
                  {"lambda1_over_L1", ints(parts.lambda1_over_L1)},
                  {"lambda2_over_L2", ints(parts.lambda2_over_L2)}}},
                {"quotients_isomorphic", parts.isomorphic()},
                {"hecke_module", module_json(Q)},
                {"strong", strong}};
    return {"congruence-module", {{"split", o.split}}, digest, out};
}

io::ResultRecord do_disc_equiv(const Options& o) {
    auto [inst, digest] = load_instance(o.instance);
    auto pairing = inst.pairing_or_standard();
    auto split = ambient_split(inst, o.split);
    if (!is_prime(Int(o.prime))) throw DomainError(std::to_string(o.prime) + " is not prime");
    auto r = disc_equivalence(inst.system.lattice(), inst.dual_or_computed(), pairing, split, Int(o.prime));
    Json out = {{"excluded", r.excluded},
                {"obstruction_primes", ints(r.obstruction_primes)},
                {"discriminant", r.discriminant ? io::to_json(*r.discriminant) : Json(nullptr)},
                {"valuation_positive", r.valuation_positive},
                {"module_nontrivial_at_p", r.module_nontrivial_at_p},
                {"module", module_json(r.module)},
                {"agree", r.agree()}};
    return {"disc-equiv", {{"split", o.split}, {"prime", o.prime}}, digest, out};
}

io::ResultRecord do_detect(const Options& o) {
    auto [inst, digest] = load_instance(o.instance);
    OrbitGrouping g = o.grouping == "galois" ? OrbitGrouping::Galois : OrbitGrouping::None;
    std::optional<PairingContext> ctx;
    if (inst.pairing || inst.dual_lattice) ctx = PairingContext{inst.dual_or_computed(), inst.pairing_or_standard()};
    auto rep = detect_congruences(inst.system, o.prime, g, o.ext_degree, ctx);

    Json comps = Json::array();
    for (const auto& c : rep.components)
        comps.push_back({{"dim", c.dim},
                         {"orbit_size", c.orbit_size},
                         {"semisimple", c.semisimple},
                         {"factors", c.factors},
                         {"values", values_json(c.values)},
                         {"residues", c.residues}});
    Json pairs = Json::array();
    for (const auto& p : rep.pairs)
        pairs.push_back({{"a", p.a},
                         {"b", p.b},
                         {"shared", p.shared},
                         {"lattice_module", module_json(p.lattice_module)},
                         {"hecke_module", module_json(p.hecke_module)},
                         {"strong", p.strong}});
    Json collisions = Json::array();
    for (const auto& c : rep.collisions)
        collisions.push_back(
            {{"component", c.component}, {"orbit_size", c.orbit_size}, {"distinct_residues", c.distinct_residues}});
    Json out = {{"verdict", rep.verdict},
                {"degree", rep.degree},
                {"obstruction_primes", ints(rep.obstruction_primes)},
                {"components", comps},
                {"pairs", pairs},
                {"collisions", collisions}};
    Json params = {{"prime", o.prime}, {"orbit_grouping", o.grouping}};
    if (o.ext_degree) params["ext_degree"] = *o.ext_degree;
    return {"detect", params, digest, out};
}

io::ResultRecord do_modsym(const Options& o) {
    if (o.level < 1) throw DomainError("level must be positive");
    std::vector<long> primes = o.hecke;
    if (primes.empty())
        for (long l = 2; l <= 20; ++l)
            if (is_prime(Int(l)) && o.level % l != 0) primes.push_back(l);
    auto kind = o.heilbronn == "merel" ? modsym::HeilbronnKind::Merel : modsym::HeilbronnKind::Cremona;

    auto space = modsym::build_space(o.level);
    auto lat = modsym::cuspidal_lattice(space);
    std::vector<std::pair<long, IntMatrix>> ops;
    Json charpolys = Json::object();
    for (long l : primes) {
        ops.emplace_back(l, modsym::hecke_operator(space, lat, l, kind));
        charpolys[std::to_string(l)] = to_string(charpoly(ops.back().second));
    }
    io::Instance inst;
    inst.system = modsym::to_hecke_system(lat, ops);
    inst.metadata = {{"source", "modular-symbols"}, {"level", o.level}, {"weight", 2}};

    Json params = {{"level", o.level}, {"hecke", primes}, {"heilbronn", o.heilbronn}};
    Json out = {{"manin_symbols", space.symbols.size()},
                {"torsion", ints(space.torsion)},
                {"free_rank", space.free_rank},
                {"cusps", space.cusps.size()},
                {"cuspidal_rank", lat.rank()},
                {"charpolys", charpolys},
                {"instance", io::instance_to_json(inst)}};
    return {"modsym", params, io::content_digest(params), out};
}

io::ResultRecord do_satake(const Options& o) {
    auto mode = o.trusted ? io::IngestMode::Trusted : io::IngestMode::Strict;
    Json raw_a = io::parse_json(read_file(o.table_a));
    Json raw_b = io::parse_json(read_file(o.table_b));
    auto a = io::eigenvalue_table_from_json(raw_a, mode);
    auto b = io::eigenvalue_table_from_json(raw_b, mode);
    if (a.n != b.n) throw DomainError("tables have different n (" + std::to_string(a.n) + " and " + std::to_string(b.n) + ")");
    std::vector<Int> exclude(o.exclude.begin(), o.exclude.end());
    auto r = congruent_eigensystems(a.entries, b.entries, Int(o.prime), o.ext_degree.value_or(1), exclude);

    Json pairs = Json::array();
    for (const auto& p : r.pairs)
        pairs.push_back({{"tag", io::to_json(p.tag)}, {"j", p.j}, {"a", p.a}, {"b", p.b}, {"equal", p.equal}});
    Json warnings = a.warnings;
    for (const auto& w : b.warnings) warnings.push_back(w);
    Json out = {{"congruent", r.congruent},
                {"degree", r.degree},
                {"labels", {a.label, b.label}},
                {"tested_tags", ints(r.tested_tags)},
                {"excluded_tags", ints(r.excluded_tags)},
                {"pairs", pairs},
                {"warnings", warnings}};
    Json params = {{"prime", o.prime}, {"ext_degree", o.ext_degree.value_or(1)}, {"exclude", o.exclude},
                   {"mode", o.trusted ? "trusted" : "strict"}};
    return {"satake", params, io::content_digest(Json{{"a", raw_a}, {"b", raw_b}}), out};
}

io::ResultRecord do_criticality(const Options& o) {
    static const std::regex sig(R"(([0-9]{1,4}),([0-9]{1,4}))");
    std::smatch m;
    if (!std::regex_match(o.signature, m, sig)) throw UsageError("--signature must look like r1,r2");
    unsigned r1 = std::stoul(m[1]), r2 = std::stoul(m[2]);
    auto weights = crit::parse_weights(o.weights, r1, r2, o.n);
    auto rep = crit::is_critical_at_1(r1, r2, weights, o.n);
    auto displays = [](const std::vector<crit::GammaFactor>& fs) {
        Json a = Json::array();
        for (const auto& f : fs) a.push_back(f.display());
        return a;
    };
    Json out = {{"critical", rep.critical},
                {"full", rep.full.display()},
                {"adjoint", rep.adjoint.display()},
                {"adjoint_degree", rep.adjoint.degree()},
                {"poles_at_1", displays(rep.poles_at_1)},
                {"poles_at_0", displays(rep.poles_at_0)},
                {"explanation", rep.explanation}};
    Json params = {{"n", o.n}, {"signature", {r1, r2}}, {"weights", o.weights}};
    return {"criticality", params, io::content_digest(params), out};
}

io::ResultRecord do_gen(const Options& o) {
    auto inst = io::random_instance(o.seed, o.dim, o.ops, o.plant);
    Json params = {{"seed", std::to_string(o.seed)}, {"dim", o.dim}, {"ops", o.ops}};
    params["plant"] = o.plant ? Json(*o.plant) : Json(nullptr);
    return {"gen", params, io::content_digest(params), {{"instance", io::instance_to_json(inst)}}};
}

void emit(const io::ResultRecord& r, const std::string& path, std::ostream& out) {
    std::string text = r.serialize();
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f || !(f << text)) throw DomainError("cannot write " + path);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Congruence toolkit for Hecke systems on lattices", "ctk"};
    app.set_version_flag("--version", std::string(io::kToolkitVersion));
    app.require_subcommand(1);
    Options o;

    auto with_out = [&](CLI::App* sub) {
        sub->add_option("--out", o.out, "Write the result record here (default stdout)");
        return sub;
    };
    auto instance_opt = [&](CLI::App* sub) {
        sub->add_option("--instance", o.instance, "Instance file, a record holding one, or levelN")->required();
    };
    auto split_opt = [&](CLI::App* sub) {
        sub->add_option("--split", o.split, "Component indices on the first side, e.g. 0,2")
            ->required()
            ->delimiter(',');
    };
    auto prime_opt = [&](CLI::App* sub) {
        sub->add_option("--prime", o.prime, "The prime p")->required()->check(CLI::PositiveNumber);
    };

    auto* snf_cmd = with_out(app.add_subcommand("snf", "Smith normal form of an integer matrix"));
    auto* m_opt = snf_cmd->add_option("--matrix", o.matrix, "Matrix as JSON, e.g. [[2,4],[6,8]]");
    snf_cmd->add_option("--in", o.in, "File holding the matrix JSON")->excludes(m_opt);

    auto* dual_cmd = with_out(app.add_subcommand("lattice-dual", "Dual lattice under the instance pairing"));
    instance_opt(dual_cmd);
    dual_cmd->add_option("--side", o.side, "Side of the pairing the lattice sits on")
        ->check(CLI::IsMember({"left", "right"}));

    auto* cm_cmd = with_out(app.add_subcommand("congruence-module", "Congruence module of a split"));
    instance_opt(cm_cmd);
    split_opt(cm_cmd);

    auto* de_cmd = with_out(app.add_subcommand("disc-equiv", "Discriminant versus congruence module at p"));
    instance_opt(de_cmd);
    split_opt(de_cmd);
    prime_opt(de_cmd);

    auto* det_cmd = with_out(app.add_subcommand("detect", "Find congruent eigensystems mod p"));
    instance_opt(det_cmd);
    prime_opt(det_cmd);
    det_cmd->add_option("--orbit-grouping", o.grouping, "none or galois")->check(CLI::IsMember({"none", "galois"}));
    det_cmd->add_option("--ext-degree", o.ext_degree, "Residue field degree m")->check(CLI::Range(1u, 64u));

    auto* ms_cmd = with_out(app.add_subcommand("modsym", "Weight-2 cuspidal modular symbols for Gamma_0(N)"));
    ms_cmd->add_option("--level", o.level, "The level N")->required()->check(CLI::Range(1L, 5000L));
    ms_cmd->add_option("--hecke", o.hecke, "Primes l for T_l (default: primes up to 20 not dividing N)")
        ->delimiter(',');
    ms_cmd->add_option("--heilbronn", o.heilbronn, "cremona or merel")->check(CLI::IsMember({"cremona", "merel"}));

    auto* sat_cmd = with_out(app.add_subcommand("satake", "Compare two eigenvalue tables mod p"));
    sat_cmd->add_option("--table-a", o.table_a, "First eigenvalue table")->required();
    sat_cmd->add_option("--table-b", o.table_b, "Second eigenvalue table")->required();
    prime_opt(sat_cmd);
    sat_cmd->add_option("--ext-degree", o.ext_degree, "Residue field degree m")->check(CLI::Range(1u, 64u));
    sat_cmd->add_option("--exclude", o.exclude, "Tags to skip")->delimiter(',');
    sat_cmd->add_flag("--trusted", o.trusted, "Downgrade non-prime-power q to a warning");

    auto* crit_cmd = with_out(app.add_subcommand("criticality", "Is s = 1 critical for the adjoint L-function"));
    crit_cmd->add_option("--n", o.n, "Rank n of GL_n")->required()->check(CLI::Range(1u, 64u));
    crit_cmd->add_option("--signature", o.signature, "r1,r2")->required();
    crit_cmd->add_option("--weights", o.weights, "e.g. l1=4 or a1=1/2,b1=-1/2; empty for generic weights");

    auto* gen_cmd = with_out(app.add_subcommand("gen", "Seeded random instance"));
    gen_cmd->add_option("--seed", o.seed, "Seed")->required();
    gen_cmd->add_option("--dim", o.dim, "Ambient dimension")->required();
    gen_cmd->add_option("--ops", o.ops, "Number of operators")->required();
    gen_cmd->add_option("--plant", o.plant, "Plant a congruence at this prime");

    std::vector<std::string> argv_store{"ctk"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? 0 : 2;
    }

    try {
        io::ResultRecord r;
        if (*snf_cmd) r = do_snf(o);
        else if (*dual_cmd) r = do_lattice_dual(o);
        else if (*cm_cmd) r = do_congruence_module(o);
        else if (*de_cmd) r = do_disc_equiv(o);
        else if (*det_cmd) r = do_detect(o);
        else if (*ms_cmd) r = do_modsym(o);
        else if (*sat_cmd) r = do_satake(o);
        else if (*crit_cmd) r = do_criticality(o);
        else r = do_gen(o);
        emit(r, o.out, out);
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace ctk::cli
