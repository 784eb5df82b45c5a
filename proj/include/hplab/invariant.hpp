#pragma once

#include "hplab/expr.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace hplab {

struct SubspaceSpec {
    std::vector<Expr> basis;           // functions of eta
    std::vector<double> sample_points; // eta values, at least 2k
    std::size_t trials = 20;
    double coef_lo = -2.0;
    double coef_hi = 2.0;
    std::uint64_t seed = 20240601;

    /// M = 8k sample points log-spaced on [0.1, 10] unless `points` is given.
    static SubspaceSpec make(std::vector<Expr> basis, std::size_t points = 0, double lo = 0.1, double hi = 10.0);
    /// Basis from DSL sources ("1", "ln(sinh(eta))", ...).
    static SubspaceSpec from_sources(const std::vector<std::string>& sources, std::size_t points = 0);
};

struct InvarianceVerdict {
    bool invariant = false;
    double threshold = 0.0;
    double worst_relative_residual = 0.0;
    double min_singular_value = 0.0;   // of the column-normalised sample matrix
    std::vector<double> residuals;     // per trial
    std::vector<std::vector<double>> coefficients;  // c per trial
    std::vector<std::vector<double>> fitted;        // a per trial, F[sum c phi] ~ sum a phi

    /// "invariant to tolerance" or "not invariant"
    std::string label() const;
};

constexpr double kDefaultInvarianceThreshold = 1e-7;

/// Operator template in u and lap(.), e.g. "u*lap(u)".
Expr parse_operator(const std::string& src);

/// Numerical test that F maps span(basis) into itself. Each trial draws c,
/// applies F to u = sum c_j phi_j symbolically, samples the result and
/// least-squares fits it onto the basis; the residual is
/// ||Phi a - w|| / max(1, ||w||). Throws IllConditionedBasis when the
/// smallest singular value of the column-normalised sample matrix is at or
/// below 1e-8.
InvarianceVerdict check_invariance(const Expr& op, const SubspaceSpec& sub,
                                   double threshold = kDefaultInvarianceThreshold);

struct CoefficientMap {
    std::vector<double> a;
    double relative_residual = 0.0;
};

/// Fitted coefficients of F[sum c_j phi_j]; throws Error when the image is
/// not in the span to `threshold`.
CoefficientMap induced_coefficient_map(const Expr& op, const SubspaceSpec& sub, const std::vector<double>& c,
                                       double threshold = kDefaultInvarianceThreshold);

}  // namespace hplab
