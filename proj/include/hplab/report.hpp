#pragma once

#include "hplab/invariant.hpp"
#include "hplab/solutions.hpp"
#include "hplab/solver.hpp"
#include "hplab/verify.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace hplab::report {

using Json = nlohmann::ordered_json;

/// {family, equation, grid:{eta, t}, max_abs_residual, mean_abs_residual, argmax:{eta, t}}
Json residual_json(const ResidualReport& r);

/// {name, params, spatial_src, temporal_src, equation_src, validity}
Json family_json(const SolutionFamily& fam);
Json catalog_json(const std::vector<SolutionFamily>& families);

struct MapCheck {
    std::vector<double> c;
    std::vector<double> a;
    double relative_residual = 0.0;
};

/// {operator, basis, M, N, threshold, verdict, worst_residual, map_check}
Json invariance_json(const std::string& op_src, const std::vector<std::string>& basis, const SubspaceSpec& sub,
                     const InvarianceVerdict& v, const MapCheck* map);

Json convergence_json(const ConvergenceReport& r);

/// Run summary: steps, dt, final errors, and one entry per snapshot with
/// nodal values (eta, u, exact, abs_err).
Json run_json(const RunResult& r, const RadialGrid& grid);

/// Snapshot table with header eta,u_real,u_imag,exact_real,exact_imag,abs_err.
std::string snapshot_csv(const Snapshot& s, const RadialGrid& grid);

/// Shortest text that reads back to the same double ("nan", "inf", "-inf" for non-finite values).
std::string format_number(double x);

/// Writes via a temporary file in the same directory and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// UTC time in ISO 8601, used only inside report header blocks.
std::string utc_timestamp();

}  // namespace hplab::report
