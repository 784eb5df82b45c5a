#include "hplab/report.hpp"

#include "hplab/error.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

namespace hplab::report {

namespace {

Json bound(double x)
{
    if (std::isfinite(x)) return x;
    return x > 0 ? "inf" : "-inf";
}

Json interval_json(const Interval& iv) { return Json{{"lo", bound(iv.lo)}, {"hi", bound(iv.hi)}}; }

}  // namespace

Json residual_json(const ResidualReport& r)
{
    Json j;
    j["family"] = r.family;
    j["equation"] = r.equation;
    j["grid"] = Json{{"eta", r.eta}, {"t", r.t}};
    j["max_abs_residual"] = r.max_abs_residual;
    j["mean_abs_residual"] = r.mean_abs_residual;
    j["argmax"] = Json{{"eta", r.argmax_eta}, {"t", r.argmax_t}};
    j["evaluated"] = r.evaluated;
    j["skipped"] = r.skipped;
    return j;
}

Json family_json(const SolutionFamily& fam)
{
    Json params = Json::object();
    for (const auto& [k, v] : fam.params) params[k] = v;
    Json j;
    j["name"] = fam.name;
    j["params"] = params;
    j["spatial_src"] = fam.spatial_src();
    j["temporal_src"] = fam.temporal_src();
    j["equation_src"] = fam.equation.describe();
    j["validity"] = Json{{"eta", interval_json(fam.validity.eta)},
                         {"t", interval_json(fam.validity.t)},
                         {"t_includes_lo", fam.validity.t_includes_lo}};
    return j;
}

Json catalog_json(const std::vector<SolutionFamily>& families)
{
    Json arr = Json::array();
    for (const auto& f : families) arr.push_back(family_json(f));
    return arr;
}

Json invariance_json(const std::string& op_src, const std::vector<std::string>& basis, const SubspaceSpec& sub,
                     const InvarianceVerdict& v, const MapCheck* map)
{
    Json j;
    j["operator"] = op_src;
    j["basis"] = basis;
    j["M"] = sub.sample_points.size();
    j["N"] = sub.trials;
    j["threshold"] = v.threshold;
    j["verdict"] = v.label();
    j["worst_residual"] = v.worst_relative_residual;
    j["min_singular_value"] = v.min_singular_value;
    j["residuals"] = v.residuals;
    if (map) {
        j["map_check"] = Json{{"c", map->c}, {"a", map->a}, {"relative_residual", map->relative_residual}};
    } else {
        j["map_check"] = nullptr;
    }
    return j;
}

Json convergence_json(const ConvergenceReport& r)
{
    Json j;
    j["resolutions"] = r.resolutions;
    j["spacing"] = r.spacing;
    j["errors_linf"] = r.errors_linf;
    j["errors_l2"] = r.errors_l2;
    j["order_linf"] = Json{{"pairwise", r.order_linf.pairwise}, {"global", r.order_linf.global}};
    j["order_l2"] = Json{{"pairwise", r.order_l2.pairwise}, {"global", r.order_l2.global}};
    return j;
}

Json run_json(const RunResult& r, const RadialGrid& grid)
{
    Json j;
    j["steps"] = r.steps;
    j["substeps"] = r.substeps;
    j["dt"] = r.dt;
    j["err_linf"] = r.err_linf;
    j["err_l2"] = r.err_l2;
    j["rel_err_linf"] = r.rel_err_linf;
    Json snaps = Json::array();
    for (const auto& s : r.snapshots) {
        Json sj;
        sj["t"] = s.t;
        sj["err_linf"] = s.err_linf;
        sj["err_l2"] = s.err_l2;
        std::vector<double> ur, ui, er, ei, ae;
        for (std::size_t i = 0; i < s.u.size(); ++i) {
            ur.push_back(s.u[i].real());
            ui.push_back(s.u[i].imag());
            er.push_back(s.exact[i].real());
            ei.push_back(s.exact[i].imag());
            ae.push_back(std::abs(s.u[i] - s.exact[i]));
        }
        sj["eta"] = std::vector<double>(grid.nodes().begin(), grid.nodes().end());
        sj["u_real"] = ur;
        sj["u_imag"] = ui;
        sj["exact_real"] = er;
        sj["exact_imag"] = ei;
        sj["abs_err"] = ae;
        snaps.push_back(std::move(sj));
    }
    j["snapshots"] = std::move(snaps);
    return j;
}

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string snapshot_csv(const Snapshot& s, const RadialGrid& grid)
{
    std::ostringstream os;
    os << "eta,u_real,u_imag,exact_real,exact_imag,abs_err\n";
    for (std::size_t i = 0; i < s.u.size(); ++i) {
        os << format_number(grid.eta(i)) << ',' << format_number(s.u[i].real()) << ','
           << format_number(s.u[i].imag()) << ',' << format_number(s.exact[i].real()) << ','
           << format_number(s.exact[i].imag()) << ',' << format_number(std::abs(s.u[i] - s.exact[i])) << '\n';
    }
    return os.str();
}

void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    namespace fs = std::filesystem;
    const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
    std::error_code ec;
    if (!dir.empty()) fs::create_directories(dir, ec);
    const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("cannot rename onto " + path.string() + ": " + ec.message());
    }
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace hplab::report
