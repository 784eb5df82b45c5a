#pragma once

#include "hplab/expr.hpp"
#include "hplab/timeops.hpp"

#include <limits>
#include <map>
#include <string>
#include <vector>

namespace hplab {

/// Open interval (lo, hi); hi may be +inf. Empty when lo >= hi.
struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool empty() const { return !(lo < hi); }
    bool contains(double x) const { return x > lo && x < hi; }
};

/// eta-range where every domain guard of a family holds, and its time range.
/// The time range includes t = lo when `t_includes_lo` is set.
struct ValidityRegion {
    Interval eta;
    Interval t;
    bool t_includes_lo = true;

    bool empty() const { return eta.empty() || t.empty(); }
};

/// The equation O_t u = F[u]; F is an operator template in `u` and `lap(.)`.
struct OperatorSpec {
    TimeOperator time;
    std::string spatial_src;  // e.g. "lap(u^n) - u"
    Expr spatial;             // parsed, parameters bound

    static OperatorSpec make(TimeOperator time, std::string spatial_src,
                             const std::map<std::string, double>& params = {});
    /// "<time operator>: <spatial_src>"
    std::string describe() const;
};

/// u(eta, t) = sum_j temporal_j(t) * spatial_j(eta)
struct SeparableTerm {
    Expr temporal;
    Expr spatial;
};

struct SolutionFamily {
    std::string name;
    std::map<std::string, double> params;
    std::vector<SeparableTerm> terms;
    OperatorSpec equation;
    ValidityRegion validity;
    EvalMode mode = EvalMode::Real;
    /// False for members recorded only to document a residual that does not
    /// vanish (the literal Laguerre profile).
    bool admitted = true;
    std::string note;

    Expr solution() const;
    std::string spatial_src() const;
    std::string temporal_src() const;
};

/// Which C_0 profile the Laguerre member of the power-root family uses.
enum class LaguerreProfile {
    Reflected,  // C_0(-t): O_t f = -f holds
    Literal,    // C_0(t): O_t f = +f, kept to document the sign discrepancy
};

/// u = f(t) (c1 ln tanh(eta/2) + c2)^(1/n) with O_t f = -f; for a
/// ShiftedClassical operator f = exp(lambda t) and F = lap(u^n).
SolutionFamily family_theorem21(const TimeOperator& op, double n, double c1, double c2,
                                LaguerreProfile profile = LaguerreProfile::Reflected);

/// The complex periodic member: lambda = i omega / alpha.
SolutionFamily family_periodic(double n, double c1, double c2, double omega, double alpha);

/// u = f1 ln(sinh eta) + f2 ln(tanh(eta/2)) + f3 for O_t u = u lap(u). The
/// temporal functions must satisfy O_t f1 = f1^2, O_t f2 = f1 f2,
/// O_t f3 = f1 f3 on `t_range`; checked pointwise, DomainError otherwise.
SolutionFamily family_theorem22(const TimeOperator& op, const Expr& f1, const Expr& f2, const Expr& f3,
                                Interval t_range, bool t_includes_lo = true,
                                std::map<std::string, double> params = {}, std::string name = "theorem22");

/// Classical blow-up member f1 = 1/(t0-t), f2 = c1/(t0-t), f3 = c2/(t0-t).
SolutionFamily family_blowup(double t0, double c1, double c2);

/// Laguerre member f1 = 1/t, f2 = c1/t, f3 = c2 t on t > 0.
SolutionFamily family_theorem22_laguerre(double c1, double c2);

/// Largest open eta-interval with c1 ln tanh(eta/2) + c2 > 0.
Interval positivity_interval(double c1, double c2);

ValidityRegion validity_region(const SolutionFamily& fam);

/// The six admitted catalog members at the default parameter sets.
std::vector<SolutionFamily> default_catalog();

/// Family by catalog name with parameter overrides; unknown names throw
/// DomainError.
SolutionFamily make_family(const std::string& name, const std::map<std::string, double>& params);

std::vector<std::string> family_names();

}  // namespace hplab
