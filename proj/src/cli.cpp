#include "hplab/cli.hpp"

#include "hplab/error.hpp"
#include "hplab/report.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <sstream>

namespace hplab::cli {

namespace {

using report::Json;

struct Common {
    std::string out;
    std::string format = "json";
    std::uint64_t seed = 20240601;
    std::string timestamp;
};

struct FamilyArgs {
    std::string family;
    std::optional<double> n, c1, c2, beta, omega, alpha, t0;
    std::vector<std::string> params;

    std::map<std::string, double> bindings() const
    {
        std::map<std::string, double> p;
        auto put = [&](const char* k, const std::optional<double>& v) {
            if (v) p[k] = *v;
        };
        put("n", n);
        put("c1", c1);
        put("c2", c2);
        put("beta", beta);
        put("omega", omega);
        put("alpha", alpha);
        put("t0", t0);
        for (const auto& kv : params) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw DomainError("--param expects key=value, got '" + kv + "'");
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(kv.substr(eq + 1), &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0 || used != kv.size() - eq - 1) throw DomainError("--param value is not a number: '" + kv + "'");
            p[kv.substr(0, eq)] = v;
        }
        return p;
    }
};

void add_family_options(CLI::App* sub, FamilyArgs& f)
{
    sub->add_option("--family", f.family, "catalog family name");
    sub->add_option("--n", f.n, "nonlinearity exponent");
    sub->add_option("--c1", f.c1);
    sub->add_option("--c2", f.c2);
    sub->add_option("--beta", f.beta, "Caputo order");
    sub->add_option("--omega", f.omega);
    sub->add_option("--alpha", f.alpha);
    sub->add_option("--t0", f.t0, "blow-up time");
    sub->add_option("--param", f.params, "extra binding key=value")->take_all();
}

void add_common_options(CLI::App* sub, Common& c)
{
    sub->add_option("--out", c.out, "output file (stdout when omitted)");
    sub->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", c.seed, "random seed");
}

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    for (auto& p : parts) {
        const auto a = p.find_first_not_of(" \t");
        const auto b = p.find_last_not_of(" \t");
        p = a == std::string::npos ? std::string() : p.substr(a, b - a + 1);
    }
    return parts;
}

template <class T>
std::vector<T> parse_list(const std::string& s, const char* what)
{
    std::vector<T> out;
    for (const auto& item : split(s, ',')) {
        std::istringstream is(item);
        T v{};
        if (item.empty() || !(is >> v) || !is.eof()) throw DomainError(std::string("bad value in ") + what + ": '" + item + "'");
        out.push_back(v);
    }
    return out;
}

Equation parse_equation(const std::string& s)
{
    if (s == "porous-decay") return Equation::PorousDecay;
    if (s == "quasilinear") return Equation::Quasilinear;
    if (s == "periodic") return Equation::PeriodicForced;
    throw DomainError("unknown equation '" + s + "' (porous-decay, quasilinear, periodic)");
}

Scheme parse_scheme(const std::string& s)
{
    if (s == "rk4") return Scheme::ExplicitRK4;
    if (s == "implicit-euler") return Scheme::ImplicitEuler;
    if (s == "l1") return Scheme::FractionalL1;
    throw DomainError("unknown scheme '" + s + "' (rk4, implicit-euler, l1)");
}

std::string default_family(Equation eq)
{
    switch (eq) {
    case Equation::PorousDecay: return "theorem21-classical";
    case Equation::Quasilinear: return "theorem22-blowup";
    case Equation::PeriodicForced: return "prop22-periodic";
    }
    return {};
}

// The solver's quasilinear runs use the member that stays positive.
SolutionFamily solver_family(const FamilyArgs& f, Equation eq)
{
    auto p = f.bindings();
    const std::string name = f.family.empty() ? default_family(eq) : f.family;
    if (name == "theorem22-blowup") {
        p.try_emplace("c1", -1.0);
        p.try_emplace("c2", 0.0);
    }
    return make_family(name, p);
}

Json envelope(const std::string& command, const Common& c, Json body)
{
    Json j;
    j["header"] = Json{{"tool", "hplab"}, {"command", command}, {"timestamp", c.timestamp}};
    j["seed"] = c.seed;
    j["body"] = std::move(body);
    return j;
}

void emit(const Common& c, const std::string& text, std::ostream& out)
{
    if (c.out.empty()) {
        out << text;
    } else {
        report::write_atomic(c.out, text);
    }
}

std::string csv_row(std::initializer_list<std::string> cells)
{
    std::string s;
    bool first = true;
    for (const auto& c : cells) {
        if (!first) s += ',';
        s += c;
        first = false;
    }
    return s + '\n';
}

using report::format_number;

// --------------------------------------------------------------------------

struct VerifyArgs {
    FamilyArgs fam;
    std::optional<double> t_max;
    double threshold = kResidualGate;
    bool controls = false;
};

int cmd_verify(const VerifyArgs& a, const Common& c, std::ostream& out, std::ostream& err)
{
    std::vector<SolutionFamily> families;
    if (a.fam.family.empty()) {
        if (!a.fam.bindings().empty()) throw DomainError("parameter flags need --family");
        families = default_catalog();
    } else {
        families.push_back(make_family(a.fam.family, a.fam.bindings()));
    }
    ResidualOptions opt;
    opt.t_max = a.t_max;

    bool pass = true;
    Json reports = Json::array();
    std::string csv = csv_row({"family", "control", "max_abs_residual", "mean_abs_residual", "argmax_eta", "argmax_t"});
    for (const auto& fam : families) {
        const ResidualReport r = residual(fam, opt);
        const bool ok = r.max_abs_residual <= a.threshold;
        pass = pass && ok;
        Json j = report::residual_json(r);
        j["threshold"] = a.threshold;
        j["pass"] = ok;
        csv += csv_row({fam.name, "", format_number(r.max_abs_residual), format_number(r.mean_abs_residual),
                        format_number(r.argmax_eta), format_number(r.argmax_t)});
        if (a.controls) {
            Json cj = Json::array();
            for (const auto& ctl : negative_controls(fam)) {
                const ResidualReport cr = residual(ctl.family, opt);
                const bool detected = cr.max_abs_residual > 1e-6;
                pass = pass && detected;
                cj.push_back(Json{{"label", ctl.label},
                                  {"max_abs_residual", cr.max_abs_residual},
                                  {"mean_abs_residual", cr.mean_abs_residual},
                                  {"argmax", Json{{"eta", cr.argmax_eta}, {"t", cr.argmax_t}}},
                                  {"detected", detected}});
                csv += csv_row({fam.name, ctl.label, format_number(cr.max_abs_residual),
                                format_number(cr.mean_abs_residual), format_number(cr.argmax_eta),
                                format_number(cr.argmax_t)});
            }
            j["negative_controls"] = std::move(cj);
        }
        if (!ok) err << "residual of " << fam.name << " is " << r.max_abs_residual << " > " << a.threshold << "\n";
        reports.push_back(std::move(j));
    }
    if (c.format == "csv") {
        emit(c, csv, out);
    } else {
        emit(c, envelope("verify", c, Json{{"reports", reports}, {"pass", pass}}).dump(2) + "\n", out);
    }
    return pass ? kPass : kFail;
}

// --------------------------------------------------------------------------

struct SubspaceArgs {
    std::string op = "u*lap(u)";
    std::string basis = "1;ln(sinh(eta));ln(tanh(eta/2))";
    std::size_t points = 0;
    std::size_t trials = 20;
    double threshold = kDefaultInvarianceThreshold;
    double eta_lo = 0.1, eta_hi = 10.0;
};

int cmd_subspace(const SubspaceArgs& a, const Common& c, std::ostream& out, std::ostream&)
{
    const std::vector<std::string> basis_src = split(a.basis, ';');
    std::vector<Expr> basis;
    ParseOptions po;
    for (const auto& s : basis_src) basis.push_back(parse(s, po));
    SubspaceSpec sub = SubspaceSpec::make(basis, a.points, a.eta_lo, a.eta_hi);
    sub.trials = a.trials;
    sub.seed = c.seed;
    const Expr op = parse_operator(a.op);
    const InvarianceVerdict v = check_invariance(op, sub, a.threshold);

    std::optional<report::MapCheck> map;
    if (v.invariant) {
        static const double probe[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
        report::MapCheck m;
        for (std::size_t j = 0; j < basis.size(); ++j) m.c.push_back(probe[j % 12] + static_cast<double>(j / 12));
        const CoefficientMap cm = induced_coefficient_map(op, sub, m.c, a.threshold);
        m.a = cm.a;
        m.relative_residual = cm.relative_residual;
        map = m;
    }

    if (c.format == "csv") {
        std::string csv = "trial,residual";
        for (std::size_t j = 0; j < basis.size(); ++j) csv += ",c" + std::to_string(j);
        for (std::size_t j = 0; j < basis.size(); ++j) csv += ",a" + std::to_string(j);
        csv += "\n";
        for (std::size_t k = 0; k < v.residuals.size(); ++k) {
            csv += std::to_string(k) + "," + format_number(v.residuals[k]);
            for (double x : v.coefficients[k]) csv += "," + format_number(x);
            for (double x : v.fitted[k]) csv += "," + format_number(x);
            csv += "\n";
        }
        emit(c, csv, out);
    } else {
        Json body = report::invariance_json(a.op, basis_src, sub, v, map ? &*map : nullptr);
        body["coefficients"] = v.coefficients;
        body["fitted"] = v.fitted;
        emit(c, envelope("subspace", c, std::move(body)).dump(2) + "\n", out);
    }
    return v.invariant ? kPass : kFail;
}

// --------------------------------------------------------------------------

struct SolveArgs {
    FamilyArgs fam;
    std::string eq = "porous-decay";
    std::string scheme;
    std::size_t grid = 200;
    double eta_min = 0.1, eta_max = 8.0;
    double t_end = 1.0;
    double dt = 1e-3;
    std::string snapshots;
    std::optional<double> max_error;
};

Scheme pick_scheme(const std::string& requested, const SolutionFamily& fam)
{
    if (!requested.empty()) return parse_scheme(requested);
    const auto& t = fam.equation.time;
    return t.kind == TimeOperator::Kind::Caputo && t.beta < 1.0 ? Scheme::FractionalL1 : Scheme::ExplicitRK4;
}

std::filesystem::path snapshot_path(const std::string& out, std::size_t k)
{
    std::filesystem::path p(out);
    const std::string stem = p.stem().string();
    return p.replace_filename(stem + "_snap" + std::to_string(k) + ".csv");
}

int cmd_solve(const SolveArgs& a, const Common& c, std::ostream& out, std::ostream& err)
{
    const Equation eq = parse_equation(a.eq);
    const SolutionFamily fam = solver_family(a.fam, eq);
    const RadialGrid grid(a.eta_min, a.eta_max, a.grid);
    const EvolutionProblem problem = EvolutionProblem::from_family(fam, eq, grid);
    RunSpec spec;
    spec.scheme = pick_scheme(a.scheme, fam);
    spec.dt = a.dt;
    spec.t_end = a.t_end;
    if (!a.snapshots.empty()) spec.snapshot_times = parse_list<double>(a.snapshots, "--snapshots");
    const RunResult r = run(problem, spec);

    const bool pass = !a.max_error || r.err_linf <= *a.max_error;
    if (!pass) err << "final L-infinity error " << r.err_linf << " exceeds " << *a.max_error << "\n";

    if (c.format == "csv") {
        std::string table = csv_row({"t", "err_linf", "err_l2"});
        for (const auto& s : r.snapshots) table += csv_row({format_number(s.t), format_number(s.err_linf), format_number(s.err_l2)});
        emit(c, table, out);
        if (!c.out.empty()) {
            for (std::size_t k = 0; k < r.snapshots.size(); ++k) {
                report::write_atomic(snapshot_path(c.out, k), report::snapshot_csv(r.snapshots[k], grid));
            }
        }
    } else {
        Json body;
        body["family"] = report::family_json(fam);
        body["equation"] = to_string(eq);
        body["scheme"] = to_string(spec.scheme);
        body["grid"] = Json{{"eta_min", grid.eta_min()}, {"eta_max", grid.eta_max()}, {"nodes", grid.size()}, {"h", grid.h()}};
        body["t_end"] = spec.t_end;
        body["run"] = report::run_json(r, grid);
        Json j = envelope("solve", c, std::move(body));
        j["header"]["seconds_per_step"] = r.seconds_per_step;
        emit(c, j.dump(2) + "\n", out);
    }
    return pass ? kPass : kFail;
}

// --------------------------------------------------------------------------

struct ConvergenceArgs {
    SolveArgs solve;
    std::string grids = "50,100,200,400";
    std::string steps;
    std::optional<double> floor;
    unsigned threads = 0;
};

double default_floor(Scheme s, bool temporal)
{
    if (!temporal) return 1.8;
    switch (s) {
    case Scheme::ExplicitRK4: return 3.6;
    case Scheme::ImplicitEuler: return 0.9;
    case Scheme::FractionalL1: return 1.3;
    }
    return 0.0;
}

int cmd_convergence(const ConvergenceArgs& a, const Common& c, std::ostream& out, std::ostream& err)
{
    const Equation eq = parse_equation(a.solve.eq);
    const SolutionFamily fam = solver_family(a.solve.fam, eq);
    RunSpec spec;
    spec.scheme = pick_scheme(a.solve.scheme, fam);
    spec.dt = a.solve.dt;
    spec.t_end = a.solve.t_end;

    const bool temporal = !a.steps.empty();
    SweepResult sweep;
    if (temporal) {
        sweep = temporal_sweep(fam, eq, RadialGrid(a.solve.eta_min, a.solve.eta_max, a.solve.grid),
                               parse_list<std::size_t>(a.steps, "--steps"), spec, a.threads);
    } else {
        sweep = spatial_sweep(fam, eq, parse_list<std::size_t>(a.grids, "--grids"), spec, a.solve.eta_min,
                              a.solve.eta_max, a.threads);
    }
    const double floor = a.floor.value_or(default_floor(spec.scheme, temporal));
    const ConvergenceReport& rep = sweep.report;
    const bool pass = rep.order_linf.global >= floor;
    if (!pass) err << "global order " << rep.order_linf.global << " below floor " << floor << "\n";

    if (c.format == "csv") {
        std::string csv = csv_row({"resolution", "spacing", "err_linf", "err_l2", "order_linf", "order_l2",
                                   "global_order_linf", "global_order_l2"});
        for (std::size_t k = 0; k < rep.resolutions.size(); ++k) {
            const std::string ol = k ? format_number(rep.order_linf.pairwise[k - 1]) : "";
            const std::string o2 = k ? format_number(rep.order_l2.pairwise[k - 1]) : "";
            csv += csv_row({format_number(rep.resolutions[k]), format_number(rep.spacing[k]),
                            format_number(rep.errors_linf[k]), format_number(rep.errors_l2[k]), ol, o2,
                            format_number(rep.order_linf.global), format_number(rep.order_l2.global)});
        }
        emit(c, csv, out);
    } else {
        Json body;
        body["family"] = fam.name;
        body["equation"] = to_string(eq);
        body["scheme"] = to_string(spec.scheme);
        body["sweep"] = temporal ? "temporal" : "spatial";
        body["t_end"] = spec.t_end;
        body["floor"] = floor;
        body["convergence"] = report::convergence_json(rep);
        body["pass"] = pass;
        emit(c, envelope("convergence", c, std::move(body)).dump(2) + "\n", out);
    }
    return pass ? kPass : kFail;
}

int cmd_catalog(bool all, const Common& c, std::ostream& out)
{
    std::vector<SolutionFamily> fams;
    if (all) {
        for (const auto& n : family_names()) fams.push_back(make_family(n, {}));
    } else {
        fams = default_catalog();
    }
    emit(c, envelope("catalog", c, report::catalog_json(fams)).dump(2) + "\n", out);
    return kPass;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact-solution verification toolkit for nonlinear diffusion on the hyperbolic plane", "hplab"};
    app.require_subcommand(1);

    Common common;
    common.timestamp = report::utc_timestamp();

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "residual check of catalog families");
    add_family_options(verify, va.fam);
    add_common_options(verify, common);
    verify->add_option("--t-max", va.t_max, "upper end of the time sample");
    verify->add_option("--threshold", va.threshold, "pass threshold on the max residual");
    verify->add_flag("--controls", va.controls, "also run the perturbed negative controls");

    SubspaceArgs sa;
    auto* subspace = app.add_subcommand("subspace", "numerical invariant-subspace check");
    add_common_options(subspace, common);
    subspace->add_option("--op", sa.op, "operator in u and lap(.)");
    subspace->add_option("--basis", sa.basis, "basis functions of eta separated by ';'");
    subspace->add_option("--points", sa.points, "sample points M (0: 8k)");
    subspace->add_option("--trials", sa.trials, "random trials N");
    subspace->add_option("--threshold", sa.threshold);
    subspace->add_option("--eta-lo", sa.eta_lo);
    subspace->add_option("--eta-hi", sa.eta_hi);

    auto solve_options = [&](CLI::App* sub, SolveArgs& s) {
        add_family_options(sub, s.fam);
        add_common_options(sub, common);
        sub->add_option("--eq", s.eq, "porous-decay, quasilinear or periodic");
        sub->add_option("--scheme", s.scheme, "rk4, implicit-euler or l1");
        sub->add_option("--grid", s.grid, "node count");
        sub->add_option("--eta-min", s.eta_min);
        sub->add_option("--eta-max", s.eta_max);
        sub->add_option("--t-end", s.t_end);
        sub->add_option("--dt", s.dt);
    };

    SolveArgs so;
    auto* solve = app.add_subcommand("solve", "finite-difference run against an exact family");
    solve_options(solve, so);
    solve->add_option("--snapshots", so.snapshots, "comma-separated snapshot times");
    solve->add_option("--max-error", so.max_error, "fail when the final L-infinity error exceeds this");

    ConvergenceArgs ca;
    auto* conv = app.add_subcommand("convergence", "grid or time-step refinement study");
    solve_options(conv, ca.solve);
    conv->add_option("--grids", ca.grids, "comma-separated node counts");
    conv->add_option("--steps", ca.steps, "comma-separated step counts (temporal sweep)");
    conv->add_option("--floor", ca.floor, "minimum accepted global order");
    conv->add_option("--threads", ca.threads);

    bool all = false;
    auto* catalog = app.add_subcommand("catalog", "print the solution catalog");
    add_common_options(catalog, common);
    catalog->add_flag("--all", all, "include non-admitted members");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kPass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kPass;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }

    try {
        if (*verify) return cmd_verify(va, common, out, err);
        if (*subspace) return cmd_subspace(sa, common, out, err);
        if (*solve) return cmd_solve(so, common, out, err);
        if (*conv) return cmd_convergence(ca, common, out, err);
        if (*catalog) return cmd_catalog(all, common, out);
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << "\n";
        return kFail;
    } catch (const EmptyValidityRegion& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace hplab::cli
