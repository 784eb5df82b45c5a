#include "hplab/verify.hpp"

#include "hplab/error.hpp"
#include "hplab/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hplab {

Expr substitute_var(const Expr& e, Var v, const Expr& value)
{
    const Node& n = e.node();
    if (n.kind == NodeKind::Var) return n.var == v ? value : e;
    if (n.args.empty()) return e;
    auto copy = std::make_shared<Node>(n);
    for (auto& a : copy->args) a = substitute_var(a, v, value);
    return Expr(std::move(copy));
}

Expr residual_expression(const SolutionFamily& fam)
{
    std::vector<Expr> lhs;
    for (const auto& term : fam.terms) {
        lhs.push_back(ex::mul({apply_symbolic(fam.equation.time, term.temporal), term.spatial}));
    }
    const Expr rhs = apply_operator(fam.equation.spatial, fam.solution());
    return simplify(ex::add({ex::add(std::move(lhs)), ex::neg(rhs)}));
}

namespace {

std::vector<double> log_space(double a, double b, std::size_t n)
{
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = a;
        return out;
    }
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(la + (lb - la) * i / (n - 1));
    out.front() = a;
    out.back() = b;
    return out;
}

std::vector<double> lin_space(double a, double b, std::size_t n)
{
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return out;
}

}  // namespace

ResidualReport residual(const SolutionFamily& fam, const ResidualOptions& opt)
{
    const ValidityRegion& v = fam.validity;
    if (v.empty()) throw EmptyValidityRegion("family '" + fam.name + "' has an empty validity region");

    double eta_lo = std::max(v.eta.lo, opt.eta_floor);
    double eta_hi = std::min(v.eta.hi, opt.eta_cap);
    if (v.eta.lo > 0.0) eta_lo = std::max(eta_lo, v.eta.lo * 1.05);
    if (std::isfinite(v.eta.hi)) eta_hi = std::min(eta_hi, v.eta.hi * 0.95);
    if (!(eta_lo < eta_hi)) throw EmptyValidityRegion("sample window in eta is empty for '" + fam.name + "'");

    double t_lo = v.t.lo;
    double t_hi = std::isfinite(v.t.hi) ? v.t.hi - opt.t0_margin * std::abs(v.t.hi) : t_lo + opt.t_cap;
    if (opt.t_max) t_hi = std::min(t_hi, *opt.t_max);
    if (!v.t_includes_lo) t_lo += 0.05 * (t_hi - t_lo);
    if (!(t_lo < t_hi)) throw EmptyValidityRegion("sample window in t is empty for '" + fam.name + "'");

    ResidualReport rep;
    rep.family = fam.name;
    rep.equation = fam.equation.describe();
    rep.eta = log_space(eta_lo, eta_hi, opt.eta_points);
    rep.t = lin_space(t_lo, t_hi, opt.t_points);

    const Expr r = residual_expression(fam);
    double sum = 0.0;
    for (double t : rep.t) {
        for (double eta : rep.eta) {
            double mag;
            try {
                mag = std::abs(evaluate(r, {eta, t, fam.mode}));
            } catch (const DomainError&) {
                ++rep.skipped;
                continue;
            }
            if (!std::isfinite(mag)) mag = std::numeric_limits<double>::infinity();
            ++rep.evaluated;
            sum += mag;
            if (mag > rep.max_abs_residual || rep.evaluated == 1) {
                rep.max_abs_residual = mag;
                rep.argmax_eta = eta;
                rep.argmax_t = t;
            }
        }
    }
    if (rep.evaluated == 0) throw DomainError("no sample point of '" + fam.name + "' could be evaluated");
    rep.mean_abs_residual = sum / static_cast<double>(rep.evaluated);
    return rep;
}

std::vector<SolutionFamily> verified_catalog(const ResidualOptions& options)
{
    auto catalog = default_catalog();
    for (const auto& fam : catalog) {
        const auto rep = residual(fam, options);
        if (!(rep.max_abs_residual <= kResidualGate) || rep.skipped > 0) {
            throw Error("catalog admission failed for '" + fam.name + "': max residual " +
                        std::to_string(rep.max_abs_residual));
        }
    }
    return catalog;
}

std::vector<NegativeControl> negative_controls(const SolutionFamily& fam, double factor)
{
    std::vector<NegativeControl> out;
    const Expr scaled_t = ex::mul({ex::constant(factor), ex::t()});

    NegativeControl rate{"time-rate", fam};
    for (auto& term : rate.family.terms) term.temporal = simplify(substitute_var(term.temporal, Var::T, scaled_t));
    rate.family.name += " [time-rate x" + std::to_string(factor) + "]";
    out.push_back(std::move(rate));

    if (fam.terms.size() == 1) {
        // root exponent 1/(factor n) in the solution, equation keeps n
        const double n = fam.params.at("n");
        NegativeControl root{"root-exponent", fam};
        const Expr& spatial = fam.terms[0].spatial;
        if (spatial.kind() == NodeKind::Pow) {
            root.family.terms[0].spatial = simplify(ex::pow(spatial.node().args[0], 1.0 / (factor * n)));
            root.family.name += " [root-exponent x" + std::to_string(factor) + "]";
            out.push_back(std::move(root));
        }
    } else {
        NegativeControl amp{"f1-amplitude", fam};
        amp.family.terms[0].temporal = simplify(ex::mul({ex::constant(factor), fam.terms[0].temporal}));
        amp.family.name += " [f1-amplitude x" + std::to_string(factor) + "]";
        out.push_back(std::move(amp));
    }
    return out;
}

OrderFit fit_order(std::span<const double> h, std::span<const double> e)
{
    if (h.size() != e.size()) throw DomainError("fit_order: spacing and error counts differ");
    if (e.size() < 3) throw DomainError("fit_order needs at least three resolutions");
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (!(e[i] > 0.0) || !std::isfinite(e[i])) throw DomainError("fit_order: errors must be positive and finite");
        if (!(h[i] > 0.0)) throw DomainError("fit_order: spacings must be positive");
        if (i && !(h[i] < h[i - 1])) throw DomainError("fit_order: spacings must strictly decrease");
    }
    OrderFit fit;
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        fit.pairwise.push_back(std::log(e[i] / e[i + 1]) / std::log(h[i] / h[i + 1]));
    }
    const std::size_t n = e.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(h[i]);
        my += std::log(e[i]);
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(h[i]) - mx;
        sxy += dx * (std::log(e[i]) - my);
        sxx += dx * dx;
    }
    fit.global = sxy / sxx;
    return fit;
}

OrderFit fit_order_halving(std::span<const double> errors)
{
    std::vector<double> h(errors.size());
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::ldexp(1.0, -static_cast<int>(i));
    return fit_order(h, errors);
}

ConvergenceReport make_convergence_report(std::vector<double> resolutions, std::vector<double> spacing,
                                          std::vector<double> errors_linf, std::vector<double> errors_l2)
{
    for (std::size_t i = 1; i < resolutions.size(); ++i) {
        if (!(resolutions[i] > resolutions[i - 1])) throw DomainError("resolutions must strictly increase");
    }
    ConvergenceReport rep;
    rep.order_linf = fit_order(spacing, errors_linf);
    rep.order_l2 = fit_order(spacing, errors_l2);
    rep.resolutions = std::move(resolutions);
    rep.spacing = std::move(spacing);
    rep.errors_linf = std::move(errors_linf);
    rep.errors_l2 = std::move(errors_l2);
    return rep;
}

CaputoSpotCheck caputo_table_spot_check(double beta, std::span<const double> times)
{
    CaputoSpotCheck out;
    const Expr profile = ex::mittag(beta, ex::neg(ex::pow(ex::t(), beta)));
    const Expr table = apply_symbolic(TimeOperator::caputo(beta), profile);
    for (double t : times) {
        const double tab = evaluate_real(table, {1.0, t});
        const double quad = caputo_quadrature(
            [beta](double s) { return specfun::mittag_leffler_profile_derivative(beta, s); }, beta, t);
        out.t.push_back(t);
        out.table.push_back(tab);
        out.quadrature.push_back(quad);
        out.max_abs_diff = std::max(out.max_abs_diff, std::abs(tab - quad));
    }
    return out;
}

}  // namespace hplab
