#pragma once

#include "hplab/solutions.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hplab {

struct ResidualOptions {
    std::size_t eta_points = 40;
    std::size_t t_points = 40;
    double eta_floor = 0.05;   // log blow-up of the logarithmic profiles
    double eta_cap = 20.0;
    double t_cap = 5.0;        // upper end for unbounded time ranges
    std::optional<double> t_max;
    double t0_margin = 1e-3;   // relative gap kept from a finite time endpoint
};

struct ResidualReport {
    std::string family;
    std::string equation;
    std::vector<double> eta;
    std::vector<double> t;
    double max_abs_residual = 0.0;
    double mean_abs_residual = 0.0;
    double argmax_eta = 0.0;
    double argmax_t = 0.0;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;   // points dropped after a domain error
};

/// O_t u - F[u] as an expression, Caputo action via the closed-form table.
Expr residual_expression(const SolutionFamily& fam);

/// Evaluates the residual on a tensor sample of the family's validity
/// region (eta log-spaced, t uniform). Complex families report |R|.
ResidualReport residual(const SolutionFamily& fam, const ResidualOptions& options = {});

/// Residual gate used for catalog admission.
constexpr double kResidualGate = 1e-9;

/// The admitted default catalog, each member checked against the gate;
/// throws Error naming the first family that fails.
std::vector<SolutionFamily> verified_catalog(const ResidualOptions& options = {});

struct NegativeControl {
    std::string label;
    SolutionFamily family;
};

/// Copies of `fam` with one structural parameter moved by `factor` in the
/// solution only (time rate, root exponent, f1 amplitude); the governing
/// equation is left untouched so each copy should fail its residual.
std::vector<NegativeControl> negative_controls(const SolutionFamily& fam, double factor = 1.1);

/// Replace every occurrence of a variable.
Expr substitute_var(const Expr& e, Var v, const Expr& value);

// ---------------------------------------------------------------------------
// Convergence analytics

struct OrderFit {
    std::vector<double> pairwise;  // one per adjacent pair
    double global = 0.0;           // least-squares slope of log e against log h
};

/// Orders from spacings h (strictly decreasing) and positive errors.
OrderFit fit_order(std::span<const double> spacing, std::span<const double> errors);

/// Same with h halving between consecutive levels.
OrderFit fit_order_halving(std::span<const double> errors);

struct ConvergenceReport {
    std::vector<double> resolutions;  // strictly increasing (nodes or steps)
    std::vector<double> spacing;
    std::vector<double> errors_linf;
    std::vector<double> errors_l2;
    OrderFit order_linf;
    OrderFit order_l2;
};

ConvergenceReport make_convergence_report(std::vector<double> resolutions, std::vector<double> spacing,
                                          std::vector<double> errors_linf, std::vector<double> errors_l2);

// ---------------------------------------------------------------------------

struct CaputoSpotCheck {
    std::vector<double> t;
    std::vector<double> table;       // -E_beta(-t^beta)
    std::vector<double> quadrature;  // definition integral
    double max_abs_diff = 0.0;
};

/// Checks the Caputo eigenfunction entry of the table against adaptive
/// quadrature of the definition at the given times.
CaputoSpotCheck caputo_table_spot_check(double beta, std::span<const double> times);

}  // namespace hplab
