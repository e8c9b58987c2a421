#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cli.hpp"
#include "ctk/criticality.hpp"
#include "ctk/io.hpp"
#include "ctk/linalg.hpp"
#include "ctk/modsym.hpp"
#include "ctk/poly.hpp"

namespace py = pybind11;
using namespace ctk;

namespace {

// Python ints are arbitrary precision; go through decimal strings both ways.
py::int_ to_py(const Int& x) {
    return py::reinterpret_steal<py::int_>(PyLong_FromString(x.get_str().c_str(), nullptr, 10));
}

Int from_py(const py::handle& h) { return Int(py::str(h).cast<std::string>()); }

py::list to_py(const IntMatrix& m) {
    py::list rows;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        py::list row;
        for (const auto& x : m.row(i)) row.append(to_py(x));
        rows.append(row);
    }
    return rows;
}

IntMatrix matrix_from_py(const py::sequence& rows) {
    std::vector<std::vector<Int>> out;
    std::size_t cols = 0;
    for (auto r : rows) {
        std::vector<Int> row;
        for (auto x : r.cast<py::sequence>()) {
            if (!py::isinstance<py::int_>(x)) throw py::type_error("matrix entries must be int");
            row.push_back(from_py(x));
        }
        if (!out.empty() && row.size() != cols) throw py::value_error("ragged matrix");
        cols = row.size();
        out.push_back(std::move(row));
    }
    return IntMatrix::from_rows(out, cols);
}

py::dict snf_py(const py::sequence& rows) {
    auto s = snf(matrix_from_py(rows));
    py::list diag;
    for (const auto& d : s.diagonal()) diag.append(to_py(d));
    py::dict out;
    out["U"] = to_py(s.U);
    out["D"] = to_py(s.D);
    out["V"] = to_py(s.V);
    out["diagonal"] = diag;
    out["rank"] = s.rank;
    return out;
}

py::tuple run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int code;
    {
        py::gil_scoped_release release;
        code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

std::size_t cuspidal_rank(long N) { return modsym::cuspidal_lattice(modsym::build_space(N)).rank(); }

std::string hecke_charpoly(long N, long l) {
    auto space = modsym::build_space(N);
    auto lat = modsym::cuspidal_lattice(space);
    return to_string(charpoly(modsym::hecke_operator(space, lat, l)));
}

bool is_critical_at_1(unsigned n, unsigned r1, unsigned r2, const std::string& weights) {
    return crit::is_critical_at_1(r1, r2, crit::parse_weights(weights, r1, r2, n), n).critical;
}

}  // namespace

PYBIND11_MODULE(_ctk, m) {
    m.doc() = "Exact congruence toolkit for Hecke systems on lattices";
    m.attr("__version__") = io::kToolkitVersion;

    // Later registrations are tried first, so the subclass goes second.
    auto domain = py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "SchemaError", domain.ptr());

    m.def("snf", &snf_py, py::arg("matrix"), "Smith normal form: dict with U, D, V, diagonal, rank");
    m.def("run_cli", &run_cli, py::arg("args"), "Run a ctk subcommand; returns (exit_code, stdout, stderr)");
    m.def("cuspidal_rank", &cuspidal_rank, py::arg("level"));
    m.def("hecke_charpoly", &hecke_charpoly, py::arg("level"), py::arg("l"),
          "Characteristic polynomial of T_l on the cuspidal lattice of level N");
    m.def("is_critical_at_1", &is_critical_at_1, py::arg("n"), py::arg("r1"), py::arg("r2"), py::arg("weights") = "");
    m.def("content_digest", [](const std::string& text) { return io::content_digest(io::parse_json(text)); },
          py::arg("json_text"), "SHA-256 of the canonical form of a JSON document");
    m.def(
        "random_instance",
        [](std::uint64_t seed, std::size_t dim, std::size_t ops, std::optional<long> plant) {
            return io::serialize_instance(io::random_instance(seed, dim, ops, plant));
        },
        py::arg("seed"), py::arg("dim"), py::arg("ops"), py::arg("plant") = py::none(), "Instance file as JSON text");
}
