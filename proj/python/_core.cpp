#include "hplab/cli.hpp"
#include "hplab/error.hpp"
#include "hplab/invariant.hpp"
#include "hplab/report.hpp"
#include "hplab/solver.hpp"
#include "hplab/specfun.hpp"
#include "hplab/verify.hpp"

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace hplab;

namespace {

std::string expr_source(const std::string& src, const std::map<std::string, double>& bindings, bool complex_mode)
{
    ParseOptions po;
    po.complex_mode = complex_mode;
    for (const auto& [k, v] : bindings) po.bindings[k] = v;
    return print(parse(src, po));
}

Complex evaluate_source(const std::string& src, double eta, double t, const std::map<std::string, double>& bindings,
                        bool complex_mode)
{
    ParseOptions po;
    po.complex_mode = complex_mode;
    for (const auto& [k, v] : bindings) po.bindings[k] = v;
    return evaluate(parse(src, po), {eta, t, complex_mode ? EvalMode::Complex : EvalMode::Real});
}

std::string laplacian_source(const std::string& src)
{
    ParseOptions po;
    po.allow_any_param = true;
    return print(hyperbolic_laplacian(parse(src, po)));
}

std::string catalog_json(bool all)
{
    std::vector<SolutionFamily> fams;
    if (all) {
        for (const auto& n : family_names()) fams.push_back(make_family(n, {}));
    } else {
        fams = default_catalog();
    }
    return report::catalog_json(fams).dump();
}

std::string residual_json(const std::string& name, const std::map<std::string, double>& params,
                          std::optional<double> t_max)
{
    ResidualOptions o;
    o.t_max = t_max;
    return report::residual_json(residual(make_family(name, params), o)).dump();
}

std::string invariance_json(const std::string& op, const std::vector<std::string>& basis, std::size_t points,
                            std::size_t trials, double threshold, std::uint64_t seed)
{
    SubspaceSpec sub = SubspaceSpec::from_sources(basis, points);
    sub.trials = trials;
    sub.seed = seed;
    const auto v = check_invariance(parse_operator(op), sub, threshold);
    auto j = report::invariance_json(op, basis, sub, v, nullptr);
    j["fitted"] = v.fitted;
    j["coefficients"] = v.coefficients;
    return j.dump();
}

std::vector<double> coefficient_map(const std::string& op, const std::vector<std::string>& basis,
                                    const std::vector<double>& c)
{
    return induced_coefficient_map(parse_operator(op), SubspaceSpec::from_sources(basis), c).a;
}

Equation equation_of(const std::string& s)
{
    if (s == "porous-decay") return Equation::PorousDecay;
    if (s == "quasilinear") return Equation::Quasilinear;
    if (s == "periodic") return Equation::PeriodicForced;
    throw DomainError("unknown equation '" + s + "'");
}

Scheme scheme_of(const std::string& s)
{
    if (s == "rk4") return Scheme::ExplicitRK4;
    if (s == "implicit-euler") return Scheme::ImplicitEuler;
    if (s == "l1") return Scheme::FractionalL1;
    throw DomainError("unknown scheme '" + s + "'");
}

std::string solve_json(const std::string& eq, const std::string& family, const std::map<std::string, double>& params,
                       const std::string& scheme, std::size_t nodes, double eta_min, double eta_max, double t_end,
                       double dt, const std::vector<double>& snapshots)
{
    const RadialGrid grid(eta_min, eta_max, nodes);
    const auto problem = EvolutionProblem::from_family(make_family(family, params), equation_of(eq), grid);
    RunSpec spec;
    spec.scheme = scheme_of(scheme);
    spec.dt = dt;
    spec.t_end = t_end;
    spec.snapshot_times = snapshots;
    py::gil_scoped_release release;
    return report::run_json(run(problem, spec), grid).dump();
}

std::string convergence_json(const std::vector<double>& h, const std::vector<double>& e)
{
    const auto f = fit_order(h, e);
    report::Json j;
    j["pairwise"] = f.pairwise;
    j["global"] = f.global;
    return j.dump();
}

py::tuple run_cli(const std::vector<std::string>& args)
{
    std::ostringstream out, err;
    int code;
    {
        py::gil_scoped_release release;
        code = cli::run(args, out, err);
    }
    return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Core bindings of the hplab toolkit";

    // translators run newest first, so the base class goes first
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<EmptyValidityRegion>(m, "EmptyValidityRegion", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<UnknownIdentifier>(m, "UnknownIdentifier", PyExc_ValueError);
    py::register_exception<SolverError>(m, "SolverError", PyExc_RuntimeError);

    m.def("mittag_leffler", &specfun::mittag_leffler, py::arg("beta"), py::arg("z"));
    m.def("c0", &specfun::c0, py::arg("t"));
    m.def("bessel_clifford", &specfun::bessel_clifford, py::arg("order"), py::arg("x"));
    m.def("log_tanh_half", &specfun::log_tanh_half, py::arg("eta"));
    m.def("log_sinh", &specfun::log_sinh, py::arg("eta"));

    m.def("normalize", &expr_source, py::arg("src"), py::arg("bindings") = std::map<std::string, double>{},
          py::arg("complex_mode") = false);
    m.def("evaluate", &evaluate_source, py::arg("src"), py::arg("eta"), py::arg("t") = 0.0,
          py::arg("bindings") = std::map<std::string, double>{}, py::arg("complex_mode") = false);
    m.def("hyperbolic_laplacian", &laplacian_source, py::arg("src"));

    m.def("family_names", &family_names);
    m.def("catalog_json", &catalog_json, py::arg("all") = false);
    m.def("residual_json", &residual_json, py::arg("family"), py::arg("params") = std::map<std::string, double>{},
          py::arg("t_max") = py::none());
    m.def("invariance_json", &invariance_json, py::arg("op"), py::arg("basis"), py::arg("points") = 0,
          py::arg("trials") = 20, py::arg("threshold") = kDefaultInvarianceThreshold, py::arg("seed") = 20240601);
    m.def("coefficient_map", &coefficient_map, py::arg("op"), py::arg("basis"), py::arg("c"));
    m.def("solve_json", &solve_json, py::arg("equation"), py::arg("family"),
          py::arg("params") = std::map<std::string, double>{}, py::arg("scheme") = "rk4", py::arg("nodes") = 200,
          py::arg("eta_min") = 0.1, py::arg("eta_max") = 8.0, py::arg("t_end") = 1.0, py::arg("dt") = 1e-3,
          py::arg("snapshots") = std::vector<double>{});
    m.def("fit_order_json", &convergence_json, py::arg("spacing"), py::arg("errors"));
    m.def("run_cli", &run_cli, py::arg("args"));
}
