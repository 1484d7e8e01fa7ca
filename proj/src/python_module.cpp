#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fgcalc/cli.hpp"
#include "fgcalc/expansion.hpp"
#include "fgcalc/functions.hpp"
#include "fgcalc/identities.hpp"
#include "fgcalc/inversion.hpp"
#include "fgcalc/parse.hpp"

namespace py = pybind11;
using namespace fgcalc;

namespace {

using Params = std::map<std::string, Complex>;

py::dict verify_case(const std::string& id, const Params& overrides, double tolerance) {
    const auto& c = find_case(id);
    auto r = verify(c, resolve_params(c, overrides), tolerance);
    py::list checks;
    for (const auto& ch : r.checks) {
        py::dict d;
        d["label"] = ch.label;
        d["lhs"] = ch.lhs;
        d["rhs"] = ch.rhs;
        d["rel_error"] = ch.rel_error;
        d["tolerance"] = ch.tolerance;
        d["passed"] = ch.passed;
        checks.append(d);
    }
    py::dict out;
    out["id"] = r.id;
    out["anchor"] = r.anchor;
    out["params"] = r.params;
    out["checks"] = checks;
    out["worst_rel_error"] = r.worst_rel_error;
    out["passed"] = r.passed;
    out["message"] = r.message;
    return out;
}

std::vector<Complex> coefficients(const std::string& pair, const std::string& nodes, const std::string& params,
                                  const std::string& function, int max_order) {
    auto sys = make_system<Deep>(parse_pair_spec(pair), parse_sequence_spec(nodes), parse_sequence_spec(params));
    ExpansionSpec<Deep> spec{make_function<Deep>(function), sys, max_order, {}};
    std::vector<Complex> out;
    for (const auto& g : expansion_coeffs(spec)) out.push_back(to_complex(g));
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "q-series and (f,g)-expansion routines";

    // FgError keeps its kind prefix in the message, e.g. "DomainViolation: ..."
    static py::exception<FgError> fg_error(m, "FgError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const FgError& e) {
            py::set_error(fg_error, e.what());
        }
    });

    m.def("qpoch", [](Complex a, Complex q, long long n) { return qpoch(a, q, n); }, py::arg("a"), py::arg("q"), py::arg("n"));
    m.def("qpoch_inf", [](Complex a, Complex q) { return qpoch_inf(a, QBase<Complex>(q)).value; }, py::arg("a"), py::arg("q"));
    m.def("qbinom", [](long long n, long long k, Complex q) { return qbinom(n, k, q); }, py::arg("n"), py::arg("k"), py::arg("q"));
    m.def("theta", [](Complex x, Complex q) { return theta(x, QBase<Complex>(q)); }, py::arg("x"), py::arg("q"));
    m.def(
        "phi",
        [](const std::vector<Complex>& upper, const std::vector<Complex>& lower, Complex q, Complex z) {
            return phi(upper, lower, QBase<Complex>(q), z).value;
        },
        py::arg("upper"), py::arg("lower"), py::arg("q"), py::arg("z"));

    m.def(
        "kernel_residual",
        [](const std::string& pair, Complex x, Complex a, Complex b, Complex c) {
            return kernel_residual(make_pair<Complex>(parse_pair_spec(pair)), x, a, b, c);
        },
        py::arg("pair"), py::arg("x"), py::arg("a"), py::arg("b"), py::arg("c"));
    m.def(
        "inversion_deviation",
        [](const std::string& pair, const std::string& nodes, const std::string& params, int size) {
            auto sys = make_system<Wide>(parse_pair_spec(pair), parse_sequence_spec(nodes), parse_sequence_spec(params));
            return verify_pair(build_pair(sys, size), 0.0).max_deviation();
        },
        py::arg("pair"), py::arg("nodes"), py::arg("params"), py::arg("size"));
    m.def("expansion_coefficients", &coefficients, py::arg("pair"), py::arg("nodes"), py::arg("params"), py::arg("function"),
          py::arg("max_order"));

    m.def("case_ids", &case_ids);
    m.def("verify_case", &verify_case, py::arg("case_id"), py::arg("overrides") = Params{}, py::arg("tolerance") = 0.0);

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            int code;
            {
                py::gil_scoped_release release;
                code = main_entry(args, out, err);
            }
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Run the fg command line in-process; returns (exit_code, stdout, stderr).");
}
