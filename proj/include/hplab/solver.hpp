#pragma once

#include "hplab/solutions.hpp"
#include "hplab/verify.hpp"

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace hplab {

/// Uniform grid eta_min = eta_0 < ... < eta_{I-1} = eta_max with the
/// conservative-form metric factors sinh(eta_i +- h/2) and sinh(eta_i).
class RadialGrid {
public:
    RadialGrid(double eta_min, double eta_max, std::size_t nodes);

    std::size_t size() const noexcept { return eta_.size(); }
    double h() const noexcept { return h_; }
    double eta(std::size_t i) const { return eta_[i]; }
    std::span<const double> nodes() const noexcept { return eta_; }
    double eta_min() const noexcept { return eta_.front(); }
    double eta_max() const noexcept { return eta_.back(); }

    /// Stencil of the interior row i: L w_i = lower w_{i-1} + diag w_i + upper w_{i+1}.
    double lower(std::size_t i) const { return lower_[i]; }
    double upper(std::size_t i) const { return upper_[i]; }
    double diag(std::size_t i) const { return -(lower_[i] + upper_[i]); }

private:
    std::vector<double> eta_;
    std::vector<double> lower_;  // s_{i-1/2} / (sinh(eta_i) h^2)
    std::vector<double> upper_;  // s_{i+1/2} / (sinh(eta_i) h^2)
    double h_;
};

/// Interior values of (1/sinh eta) d/deta (sinh eta dw/deta); the two
/// boundary entries are returned as zero.
std::vector<double> discrete_laplacian(const RadialGrid& g, std::span<const double> w);
std::vector<Complex> discrete_laplacian(const RadialGrid& g, std::span<const Complex> w);

enum class Equation {
    PorousDecay,    // O_t u = lap(u^n) - u
    Quasilinear,    // u_t = u lap(u)
    PeriodicForced, // u_t - lambda u = lap(u^n)
};

enum class Scheme { ExplicitRK4, ImplicitEuler, FractionalL1 };

std::string to_string(Equation e);
std::string to_string(Scheme s);

/// A problem driven by an exact family: initial data at t = 0 and Dirichlet
/// traces at both grid ends are read from it.
struct EvolutionProblem {
    Equation equation = Equation::PorousDecay;
    TimeOperator time;
    double n = 2.0;
    Complex lambda{};
    SolutionFamily exact;
    RadialGrid grid{0.1, 8.0, 200};

    /// Equation, operator and parameters taken from a catalog family.
    static EvolutionProblem from_family(const SolutionFamily& fam, Equation eq, const RadialGrid& grid);
};

struct RunSpec {
    Scheme scheme = Scheme::ExplicitRK4;
    double dt = 1e-3;
    double t_end = 1.0;
    std::vector<double> snapshot_times;  // t_end is always recorded
    bool check_maximum_principle = true;
};

struct Snapshot {
    double t = 0.0;
    std::vector<Complex> u;
    std::vector<Complex> exact;
    double err_linf = 0.0;
    double err_l2 = 0.0;
};

struct RunResult {
    std::vector<Snapshot> snapshots;
    std::size_t steps = 0;
    std::size_t substeps = 0;  // RK4 steps after stability subdivision
    double dt = 0.0;           // effective step (t_end / steps)
    double err_linf = 0.0;     // at t_end
    double err_l2 = 0.0;
    double rel_err_linf = 0.0;
    double seconds_per_step = 0.0;  // wall clock, not part of deterministic output

    const Snapshot& final() const { return snapshots.back(); }
};

/// Runs the problem to t_end. Throws SolverError on Newton divergence,
/// positivity loss or a maximum-principle violation, DomainError on an
/// inconsistent specification (t_end past blow-up, L1 without Caputo, ...).
RunResult run(const EvolutionProblem& problem, const RunSpec& spec);

/// Largest stable explicit step for the current state (0.2 h^2 / diffusivity).
double explicit_step_limit(const EvolutionProblem& problem, std::span<const Complex> u);

// ---------------------------------------------------------------------------
// Sweeps

struct SweepResult {
    std::vector<RunResult> runs;
    ConvergenceReport report;
};

/// Node counts in increasing order, same time settings for every grid.
/// Runs concurrently on up to `threads` workers (0: HPLAB_THREADS or the
/// hardware concurrency); results do not depend on the thread count.
SweepResult spatial_sweep(const SolutionFamily& fam, Equation eq, const std::vector<std::size_t>& nodes,
                          const RunSpec& spec, double eta_min = 0.1, double eta_max = 8.0, unsigned threads = 0);

/// Fixed grid, steps per unit time increasing (dt = t_end / steps).
SweepResult temporal_sweep(const SolutionFamily& fam, Equation eq, const RadialGrid& grid,
                           const std::vector<std::size_t>& steps, RunSpec spec, unsigned threads = 0);

unsigned worker_threads(unsigned requested = 0);

}  // namespace hplab
