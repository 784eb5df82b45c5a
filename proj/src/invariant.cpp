#include "hplab/invariant.hpp"

#include "hplab/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>

namespace hplab {

SubspaceSpec SubspaceSpec::make(std::vector<Expr> basis, std::size_t points, double lo, double hi)
{
    if (basis.empty()) throw DomainError("subspace basis must not be empty");
    if (!(lo > 0.0 && hi > lo)) throw DomainError("sample interval must satisfy 0 < lo < hi");
    SubspaceSpec s;
    const std::size_t m = points ? points : 8 * basis.size();
    if (m < 2 * basis.size()) throw DomainError("need at least 2k sample points for a basis of size k");
    s.basis = std::move(basis);
    s.sample_points.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        s.sample_points[i] = m == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (m - 1));
    }
    return s;
}

SubspaceSpec SubspaceSpec::from_sources(const std::vector<std::string>& sources, std::size_t points)
{
    std::vector<Expr> basis;
    for (const auto& src : sources) basis.push_back(parse(src));
    return make(std::move(basis), points);
}

std::string InvarianceVerdict::label() const { return invariant ? "invariant to tolerance" : "not invariant"; }

Expr parse_operator(const std::string& src)
{
    ParseOptions opt;
    opt.operator_mode = true;
    return parse(src, opt);
}

namespace {

struct Fit {
    Eigen::MatrixXd phi;     // column normalised
    Eigen::VectorXd norms;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr;
    double min_sv = 0.0;
};

Fit prepare(const SubspaceSpec& sub)
{
    const auto k = static_cast<Eigen::Index>(sub.basis.size());
    const auto m = static_cast<Eigen::Index>(sub.sample_points.size());
    if (k == 0) throw DomainError("subspace basis must not be empty");
    if (m < 2 * k) throw DomainError("need at least 2k sample points");
    Fit fit;
    fit.phi.resize(m, k);
    for (Eigen::Index j = 0; j < k; ++j) {
        for (Eigen::Index i = 0; i < m; ++i) {
            fit.phi(i, j) = evaluate_real(sub.basis[j], {sub.sample_points[i], 0.0});
        }
    }
    fit.norms = fit.phi.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < k; ++j) {
        if (!(fit.norms(j) > 0.0)) throw IllConditionedBasis("basis function " + std::to_string(j) + " vanishes on the sample");
        fit.phi.col(j) /= fit.norms(j);
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(fit.phi);
    fit.min_sv = svd.singularValues().minCoeff();
    if (!(fit.min_sv > 1e-8)) {
        throw IllConditionedBasis("basis is numerically dependent on the sample (smallest singular value " +
                                  std::to_string(fit.min_sv) + ")");
    }
    fit.qr.compute(fit.phi);
    return fit;
}

CoefficientMap fit_image(const Expr& op, const SubspaceSpec& sub, const Fit& fit, const std::vector<double>& c)
{
    std::vector<Expr> terms;
    for (std::size_t j = 0; j < c.size(); ++j) terms.push_back(ex::mul({ex::constant(c[j]), sub.basis[j]}));
    const Expr image = apply_operator(op, simplify(ex::add(std::move(terms))));
    const auto m = static_cast<Eigen::Index>(sub.sample_points.size());
    Eigen::VectorXd w(m);
    for (Eigen::Index i = 0; i < m; ++i) w(i) = evaluate_real(image, {sub.sample_points[i], 0.0});
    const Eigen::VectorXd a_norm = fit.qr.solve(w);
    CoefficientMap out;
    out.relative_residual = (fit.phi * a_norm - w).norm() / std::max(1.0, w.norm());
    out.a.resize(c.size());
    for (std::size_t j = 0; j < c.size(); ++j) out.a[j] = a_norm(static_cast<Eigen::Index>(j)) / fit.norms(static_cast<Eigen::Index>(j));
    return out;
}

}  // namespace

InvarianceVerdict check_invariance(const Expr& op, const SubspaceSpec& sub, double threshold)
{
    if (!(threshold > 0.0)) throw DomainError("threshold must be positive");
    const Fit fit = prepare(sub);
    InvarianceVerdict v;
    v.threshold = threshold;
    v.min_singular_value = fit.min_sv;

    std::mt19937_64 rng(sub.seed);
    std::uniform_real_distribution<double> coef(sub.coef_lo, sub.coef_hi);
    for (std::size_t trial = 0; trial < sub.trials; ++trial) {
        std::vector<double> c(sub.basis.size());
        for (auto& x : c) x = coef(rng);
        CoefficientMap m = fit_image(op, sub, fit, c);
        v.worst_relative_residual = std::max(v.worst_relative_residual, m.relative_residual);
        v.residuals.push_back(m.relative_residual);
        v.coefficients.push_back(std::move(c));
        v.fitted.push_back(std::move(m.a));
    }
    v.invariant = v.worst_relative_residual < threshold;
    return v;
}

CoefficientMap induced_coefficient_map(const Expr& op, const SubspaceSpec& sub, const std::vector<double>& c,
                                       double threshold)
{
    if (c.size() != sub.basis.size()) throw DomainError("coefficient count must match the basis size");
    const Fit fit = prepare(sub);
    CoefficientMap m = fit_image(op, sub, fit, c);
    if (!(m.relative_residual < threshold)) {
        throw Error("operator image leaves the span (relative residual " + std::to_string(m.relative_residual) + ")");
    }
    return m;
}

}  // namespace hplab
