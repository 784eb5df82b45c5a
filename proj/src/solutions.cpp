#include "hplab/solutions.hpp"

#include "hplab/error.hpp"

#include <cmath>
#include <sstream>

namespace hplab {

OperatorSpec OperatorSpec::make(TimeOperator time, std::string spatial_src,
                                const std::map<std::string, double>& params)
{
    ParseOptions opt;
    opt.operator_mode = true;
    opt.complex_mode = true;
    for (const auto& [k, v] : params) opt.bindings[k] = v;
    OperatorSpec spec;
    spec.time = time;
    spec.spatial = parse(spatial_src, opt);
    spec.spatial_src = std::move(spatial_src);
    return spec;
}

std::string OperatorSpec::describe() const
{
    std::ostringstream os;
    os.precision(17);
    switch (time.kind) {
    case TimeOperator::Kind::Classical: os << "d/dt u"; break;
    case TimeOperator::Kind::Caputo: os << "caputo(" << time.beta << ") u"; break;
    case TimeOperator::Kind::Laguerre: os << "d/dt t d/dt u"; break;
    case TimeOperator::Kind::ShiftedClassical:
        os << "d/dt u - (" << time.lambda.real() << (time.lambda.imag() < 0 ? "" : "+") << time.lambda.imag()
           << "*i) u";
        break;
    }
    os << " = " << spatial_src;
    return os.str();
}

Expr SolutionFamily::solution() const
{
    std::vector<Expr> sum;
    for (const auto& term : terms) sum.push_back(ex::mul({term.temporal, term.spatial}));
    return simplify(ex::add(std::move(sum)));
}

std::string SolutionFamily::spatial_src() const
{
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? "; " : "") + print(terms[i].spatial);
    return s;
}

std::string SolutionFamily::temporal_src() const
{
    std::string s;
    for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? "; " : "") + print(terms[i].temporal);
    return s;
}

Interval positivity_interval(double c1, double c2)
{
    // ln tanh(eta/2) increases from -inf to 0 on (0, inf)
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (c1 == 0.0) return c2 > 0.0 ? Interval{0.0, inf} : Interval{0.0, 0.0};
    if (c1 < 0.0) {
        if (c2 >= 0.0) return {0.0, inf};
        return {0.0, 2.0 * std::atanh(std::exp(-c2 / c1))};
    }
    if (c2 <= 0.0) return {0.0, 0.0};
    return {2.0 * std::atanh(std::exp(-c2 / c1)), inf};
}

ValidityRegion validity_region(const SolutionFamily& fam) { return fam.validity; }

namespace {

Expr root_profile(double n, double c1, double c2)
{
    Expr base = simplify(ex::add({ex::mul({ex::constant(c1), ex::ln(ex::tanh(ex::mul({ex::eta(), ex::constant(0.5)})))}),
                                  ex::constant(c2)}));
    return simplify(ex::pow(base, 1.0 / n));
}

void check_theorem21_params(double n, double c1, double c2)
{
    if (!(n > 1.0)) throw DomainError("exponent n must exceed 1");
    if (!std::isfinite(c1) || !std::isfinite(c2)) throw DomainError("c1, c2 must be finite");
    if (positivity_interval(c1, c2).empty()) {
        throw EmptyValidityRegion("empty validity region: c1 ln tanh(eta/2) + c2 > 0 holds for no eta > 0");
    }
}

}  // namespace

SolutionFamily family_theorem21(const TimeOperator& op, double n, double c1, double c2, LaguerreProfile profile)
{
    check_theorem21_params(n, c1, c2);
    SolutionFamily fam;
    fam.params = {{"n", n}, {"c1", c1}, {"c2", c2}};
    fam.validity.eta = positivity_interval(c1, c2);
    fam.validity.t = {0.0, std::numeric_limits<double>::infinity()};

    Expr temporal;
    std::string equation_src = "lap(u^n) - u";
    switch (op.kind) {
    case TimeOperator::Kind::Classical:
        fam.name = "theorem21-classical";
        temporal = ex::exp(ex::neg(ex::t()));
        break;
    case TimeOperator::Kind::Caputo:
        fam.name = "theorem21-caputo";
        fam.params["beta"] = op.beta;
        temporal = op.beta == 1.0 ? ex::exp(ex::neg(ex::t()))
                                  : ex::mittag(op.beta, ex::neg(ex::pow(ex::t(), op.beta)));
        break;
    case TimeOperator::Kind::Laguerre:
        if (profile == LaguerreProfile::Reflected) {
            fam.name = "theorem21-laguerre";
            temporal = ex::clifford(0, ex::neg(ex::t()));
        } else {
            fam.name = "theorem21-laguerre-literal";
            temporal = ex::clifford(0, ex::t());
            fam.admitted = false;
            fam.note = "C0(t) satisfies d/dt t d/dt C0 = +C0, so O_t f = -f fails; "
                       "the residual is 2 C0(t) (c1 ln tanh(eta/2) + c2)^(1/n)";
        }
        break;
    case TimeOperator::Kind::ShiftedClassical:
        fam.name = "theorem21-periodic";
        temporal = ex::exp(ex::mul({ex::constant(op.lambda), ex::t()}));
        equation_src = "lap(u^n)";
        fam.mode = EvalMode::Complex;
        break;
    }
    fam.terms = {{simplify(temporal), root_profile(n, c1, c2)}};
    fam.equation = OperatorSpec::make(op, equation_src, {{"n", n}});
    return fam;
}

SolutionFamily family_periodic(double n, double c1, double c2, double omega, double alpha)
{
    if (alpha == 0.0 || !std::isfinite(alpha)) throw DomainError("alpha must be a nonzero real");
    SolutionFamily fam = family_theorem21(TimeOperator::shifted(Complex{0.0, omega / alpha}), n, c1, c2);
    fam.name = "prop22-periodic";
    fam.params["omega"] = omega;
    fam.params["alpha"] = alpha;
    return fam;
}

SolutionFamily family_theorem22(const TimeOperator& op, const Expr& f1, const Expr& f2, const Expr& f3,
                                Interval t_range, bool t_includes_lo, std::map<std::string, double> params,
                                std::string name)
{
    if (t_range.empty()) throw EmptyValidityRegion("empty time interval");
    // O_t f1 = f1^2, O_t f2 = f1 f2, O_t f3 = f1 f3
    const Expr checks[3] = {
        ex::add({apply_symbolic(op, f1), ex::neg(ex::mul({f1, f1}))}),
        ex::add({apply_symbolic(op, f2), ex::neg(ex::mul({f1, f2}))}),
        ex::add({apply_symbolic(op, f3), ex::neg(ex::mul({f1, f3}))}),
    };
    const double hi = std::isfinite(t_range.hi) ? t_range.hi : t_range.lo + 5.0;
    for (int k = 1; k <= 7; ++k) {
        const double t = t_range.lo + (hi - t_range.lo) * k / 8.0;
        const EvalPoint p{1.0, t, EvalMode::Complex};
        for (int j = 0; j < 3; ++j) {
            const Complex r = evaluate(checks[j], p);
            const double scale = 1.0 + std::abs(evaluate(f1, p)) * (1.0 + std::abs(evaluate(j == 0 ? f1 : j == 1 ? f2 : f3, p)));
            if (std::abs(r) > 1e-9 * scale) {
                throw DomainError("temporal functions violate the reduced ODE system (equation " +
                                  std::to_string(j + 1) + ") at t=" + std::to_string(t));
            }
        }
    }
    SolutionFamily fam;
    fam.name = std::move(name);
    fam.params = std::move(params);
    fam.terms = {
        {simplify(f1), ex::ln(ex::sinh(ex::eta()))},
        {simplify(f2), ex::ln(ex::tanh(ex::mul({ex::eta(), ex::constant(0.5)})))},
        {simplify(f3), ex::constant(1.0)},
    };
    fam.equation = OperatorSpec::make(op, "u*lap(u)");
    fam.validity.eta = {0.0, std::numeric_limits<double>::infinity()};
    fam.validity.t = t_range;
    fam.validity.t_includes_lo = t_includes_lo;
    return fam;
}

SolutionFamily family_blowup(double t0, double c1, double c2)
{
    if (!(t0 > 0.0)) throw DomainError("blow-up time t0 must be positive");
    const Expr inv = ex::pow(ex::add({ex::constant(t0), ex::neg(ex::t())}), -1.0);
    return family_theorem22(TimeOperator::classical(), inv, ex::mul({ex::constant(c1), inv}),
                            ex::mul({ex::constant(c2), inv}), Interval{0.0, t0}, true,
                            {{"t0", t0}, {"c1", c1}, {"c2", c2}}, "theorem22-blowup");
}

SolutionFamily family_theorem22_laguerre(double c1, double c2)
{
    const Expr inv = ex::pow(ex::t(), -1.0);
    return family_theorem22(TimeOperator::laguerre(), inv, ex::mul({ex::constant(c1), inv}),
                            ex::mul({ex::constant(c2), ex::t()}),
                            Interval{0.0, std::numeric_limits<double>::infinity()}, false,
                            {{"c1", c1}, {"c2", c2}}, "theorem22-general");
}

namespace {

double get(const std::map<std::string, double>& p, const std::string& key, double fallback)
{
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

}  // namespace

std::vector<std::string> family_names()
{
    return {"theorem21-classical", "theorem21-caputo",  "theorem21-laguerre", "theorem21-laguerre-literal",
            "prop22-periodic",     "theorem22-general", "theorem22-blowup"};
}

SolutionFamily make_family(const std::string& name, const std::map<std::string, double>& p)
{
    if (name == "theorem21-classical")
        return family_theorem21(TimeOperator::classical(), get(p, "n", 2), get(p, "c1", -1), get(p, "c2", 0.1));
    if (name == "theorem21-caputo")
        return family_theorem21(TimeOperator::caputo(get(p, "beta", 0.5)), get(p, "n", 3), get(p, "c1", -1),
                                get(p, "c2", 1));
    if (name == "theorem21-laguerre")
        return family_theorem21(TimeOperator::laguerre(), get(p, "n", 2), get(p, "c1", -1), get(p, "c2", 0.1));
    if (name == "theorem21-laguerre-literal")
        return family_theorem21(TimeOperator::laguerre(), get(p, "n", 2), get(p, "c1", -1), get(p, "c2", 0.1),
                                LaguerreProfile::Literal);
    if (name == "prop22-periodic")
        return family_periodic(get(p, "n", 2), get(p, "c1", -1), get(p, "c2", 0.1), get(p, "omega", 2),
                               get(p, "alpha", 1));
    if (name == "theorem22-general") return family_theorem22_laguerre(get(p, "c1", 0.5), get(p, "c2", 0.25));
    if (name == "theorem22-blowup") return family_blowup(get(p, "t0", 1), get(p, "c1", 1), get(p, "c2", 0));
    throw DomainError("unknown family '" + name + "'");
}

std::vector<SolutionFamily> default_catalog()
{
    std::vector<SolutionFamily> out;
    for (const auto& name : family_names()) {
        SolutionFamily fam = make_family(name, {});
        if (fam.admitted) out.push_back(std::move(fam));
    }
    return out;
}

}  // namespace hplab
