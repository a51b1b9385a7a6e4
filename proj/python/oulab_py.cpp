#include "oulab/bounds.hpp"
#include "oulab/cli.hpp"
#include "oulab/ousolver.hpp"
#include "oulab/reduction.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace oulab;

namespace {

QuadratureSpec make_spec(double rel_tol, double abs_tol) {
    QuadratureSpec s;
    s.rel_tol = rel_tol;
    s.abs_tol = abs_tol;
    return s;
}

Method make_method(const std::string& method, std::uint64_t n, std::uint64_t seed, double rel_tol, double abs_tol) {
    if (method == "quad") return QuadMethod{make_spec(rel_tol, abs_tol)};
    if (method == "mc") return MCMethod{n, RngStream(seed, 0), true};
    throw std::invalid_argument("method must be 'quad' or 'mc'");
}

ReductionTask make_task(const Profile1D& p, std::vector<double> c, int k) {
    ReductionTask t;
    t.m = static_cast<int>(c.size());
    t.k = k;
    t.c = std::move(c);
    t.profile = p;
    return t;
}

py::dict row_dict(const DivergenceRow& r) {
    py::dict d;
    d["m"] = r.m;
    d["delta"] = r.delta;
    d["D_m"] = r.D_m;
    d["sqq_bound"] = r.sqq_bound;
    d["chain_bound"] = r.chain_bound;
    d["sqrt_harmonic"] = r.sqrt_harmonic;
    d["kernel_scale"] = to_string(r.kernel_scale);
    d["time_weighted"] = r.time_weighted;
    d["converged"] = r.converged;
    return d;
}

}  // namespace

PYBIND11_MODULE(_oulab, mod) {
    mod.doc() = "Ornstein-Uhlenbeck gradient bounds: polar reductions, resolvent solver and divergence experiments";
    mod.attr("__version__") = OULAB_VERSION;

    py::class_<Spectrum>(mod, "Spectrum")
        .def_static("quadratic", &Spectrum::quadratic, py::arg("c0") = 1.0)
        .def_static("constant", &Spectrum::constant, py::arg("value"))
        .def_static("explicit", &Spectrum::explicit_list, py::arg("values"), py::arg("c0") = std::nullopt)
        .def_static("parse", &Spectrum::parse, py::arg("descriptor"))
        .def("__call__", &Spectrum::lambda, py::arg("k"))
        .def("first", &Spectrum::first, py::arg("m"))
        .def("__repr__", &Spectrum::describe);

    py::class_<Profile1D>(mod, "Profile")
        .def(py::init(&parse_profile), py::arg("descriptor"))
        .def("__call__", &Profile1D::operator(), py::arg("x"))
        .def_property_readonly("name", &Profile1D::name)
        .def_property_readonly("odd", &Profile1D::odd)
        .def_property_readonly("sup_bound", &Profile1D::sup_bound);

    mod.def(
        "odd_reduce", [](const Profile1D& p, std::vector<double> c, int k) { return odd_reduce(make_task(p, std::move(c), k)).value; },
        py::arg("profile"), py::arg("c"), py::arg("k"), "E[F(<c, X>) X_k] for odd F by the half-domain polar form");
    mod.def(
        "radial_reduce",
        [](const Profile1D& p, std::vector<double> c, int k) { return radial_reduce(make_task(p, std::move(c), k)).value; },
        py::arg("profile"), py::arg("c"), py::arg("k"), "E[F(<c, X>) X_k] by the polar form");
    mod.def("sign_closed_form", [](std::vector<double> c, int k) { return sign_closed_form(c, k); }, py::arg("c"), py::arg("k"));

    mod.def(
        "resolvent",
        [](const Profile1D& p, std::vector<double> direction, std::vector<double> lambdas, std::vector<double> x,
           const std::string& method, std::uint64_t n, std::uint64_t seed) {
            const OUModel model = OUModel::diagonal(std::move(lambdas));
            const FieldFunction f(CylindricalFn(p, std::move(direction)));
            const Estimate e = resolvent_apply(model, f, x, make_method(method, n, seed, 1e-10, 1e-12));
            return py::make_tuple(e.value, e.error);
        },
        py::arg("profile"), py::arg("direction"), py::arg("lambdas"), py::arg("x"), py::arg("method") = "quad",
        py::arg("n") = 100000, py::arg("seed") = 1, "u(x) for f(x) = F(<direction, x>); returns (value, error)");
    mod.def(
        "grad_resolvent",
        [](const Profile1D& p, std::vector<double> direction, std::vector<double> lambdas, std::vector<double> x,
           const std::string& method, std::uint64_t n, std::uint64_t seed) {
            const OUModel model = OUModel::diagonal(std::move(lambdas));
            const FieldFunction f(CylindricalFn(p, std::move(direction)));
            return grad_resolvent_vector(model, f, x, make_method(method, n, seed, 1e-10, 1e-12)).components;
        },
        py::arg("profile"), py::arg("direction"), py::arg("lambdas"), py::arg("x"), py::arg("method") = "quad",
        py::arg("n") = 100000, py::arg("seed") = 1);

    mod.def(
        "divergence_lower_bound",
        [](const Spectrum& s, int m, double delta, bool time_weighted, const std::string& scale) {
            return row_dict(divergence_lower_bound(s, m, delta, time_weighted, parse_kernel_scale(scale)));
        },
        py::arg("spectrum"), py::arg("m"), py::arg("delta") = 1.0, py::arg("time_weighted") = false,
        py::arg("kernel_scale") = "derived");
    mod.def("chain_bound", &chain_bound, py::arg("c0"), py::arg("delta"), py::arg("spectrum"), py::arg("m"));
    mod.def(
        "witness",
        [](const Profile1D& p, const Spectrum& s, int m, double delta) { return s_m_witness(p, s, m, delta).value; },
        py::arg("profile"), py::arg("spectrum"), py::arg("m"), py::arg("delta") = 1.0);

    mod.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "runs the command line tool in-process; returns (exit_code, stdout, stderr)");
}
