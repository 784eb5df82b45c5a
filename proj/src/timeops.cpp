#include "hplab/timeops.hpp"

#include "hplab/error.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>

namespace hplab {

TimeOperator TimeOperator::caputo(double beta)
{
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("Caputo order must lie in (0, 1]");
    return {Kind::Caputo, beta, {}};
}

std::string TimeOperator::name() const
{
    switch (kind) {
    case Kind::Classical: return "classical";
    case Kind::Caputo: return "caputo";
    case Kind::Laguerre: return "laguerre";
    case Kind::ShiftedClassical: return "shifted-classical";
    }
    return "?";
}

namespace {

// Matches c * t^beta (or c * t for beta = 1); returns false otherwise.
bool match_scaled_power(const Expr& e, double beta, Complex& c)
{
    auto is_t_pow = [&](const Expr& x) {
        if (x.kind() == NodeKind::Var) return x.node().var == Var::T && beta == 1.0;
        return x.kind() == NodeKind::Pow && x.node().args[0].kind() == NodeKind::Var &&
               x.node().args[0].node().var == Var::T && x.node().args[1].node().value.real() == beta;
    };
    if (is_t_pow(e)) {
        c = 1.0;
        return true;
    }
    if (e.kind() != NodeKind::Mul) return false;
    c = 1.0;
    bool found = false;
    for (const auto& f : e.node().args) {
        Complex k;
        if (is_constant(f, &k)) {
            c *= k;
        } else if (!found && is_t_pow(f)) {
            found = true;
        } else {
            return false;
        }
    }
    return found;
}

Expr caputo_table(const Expr& f, double beta)
{
    if (!depends_on(f, Var::T)) return ex::constant(0.0);
    const Node& n = f.node();
    switch (n.kind) {
    case NodeKind::Add: {
        std::vector<Expr> terms;
        for (const auto& a : n.args) terms.push_back(caputo_table(a, beta));
        return ex::add(std::move(terms));
    }
    case NodeKind::Neg:
        return ex::neg(caputo_table(n.args[0], beta));
    case NodeKind::Mul: {
        std::vector<Expr> coef;
        const Expr* dependent = nullptr;
        for (const auto& a : n.args) {
            if (!depends_on(a, Var::T)) {
                coef.push_back(a);
            } else if (dependent) {
                throw UnsupportedCaputoForm("Caputo table: product of two t-dependent factors in " + print(f));
            } else {
                dependent = &a;
            }
        }
        coef.push_back(caputo_table(*dependent, beta));
        return ex::mul(std::move(coef));
    }
    case NodeKind::Var:
    case NodeKind::Pow: {
        double k = 1.0;
        if (n.kind == NodeKind::Pow) {
            if (n.args[0].kind() != NodeKind::Var || n.args[0].node().var != Var::T) break;
            k = n.args[1].node().value.real();
        }
        if (!(k > 0.0)) break;
        // D^beta t^k = Gamma(k+1)/Gamma(k+1-beta) t^(k-beta)
        const double c = std::tgamma(k + 1.0) / std::tgamma(k + 1.0 - beta);
        return ex::mul({ex::constant(c), ex::pow(ex::t(), k - beta)});
    }
    case NodeKind::Mittag: {
        Complex c;
        if (n.order == beta && match_scaled_power(n.args[0], beta, c)) {
            // D^beta E_beta(c t^beta) = c E_beta(c t^beta)
            return ex::mul({ex::constant(c), f});
        }
        break;
    }
    default:
        break;
    }
    throw UnsupportedCaputoForm("Caputo table has no closed form for " + print(f));
}

}  // namespace

Expr apply_symbolic(const TimeOperator& op, const Expr& f)
{
    if (depends_on(f, Var::Eta) || has_field_or_lap(f)) {
        throw DomainError("time operators act on profiles of t alone");
    }
    switch (op.kind) {
    case TimeOperator::Kind::Classical:
        return diff(f, Var::T);
    case TimeOperator::Kind::Laguerre:
        return diff(simplify(ex::mul({ex::t(), diff(f, Var::T)})), Var::T);
    case TimeOperator::Kind::ShiftedClassical:
        return simplify(ex::add({diff(f, Var::T), ex::mul({ex::constant(-op.lambda), f})}));
    case TimeOperator::Kind::Caputo:
        if (op.beta == 1.0) return diff(f, Var::T);
        return simplify(caputo_table(simplify(f), op.beta));
    }
    throw Error("unknown time operator");
}

double caputo_quadrature(const std::function<double(double)>& fprime, double beta, double t)
{
    if (!(beta > 0.0 && beta < 1.0)) throw DomainError("caputo_quadrature requires beta in (0, 1)");
    if (!(t > 0.0)) return 0.0;
    boost::math::quadrature::tanh_sinh<double> integrator(15);
    auto integrand = [&](double s, double distance_to_t) {
        // distance_to_t is t - s computed without cancellation near s = t
        const double d = distance_to_t > 0.0 ? distance_to_t : t - s;
        return std::pow(d, -beta) * fprime(s);
    };
    const double value = integrator.integrate(integrand, 0.0, t, 1e-13);
    return value / std::tgamma(1.0 - beta);
}

std::vector<double> caputo_l1_weights(double beta, std::size_t n)
{
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("L1 weights require beta in (0, 1]");
    if (n < 1) throw DomainError("L1 weights require n >= 1");
    std::vector<double> b(n);
    if (beta == 1.0) {
        b[0] = 1.0;
        return b;
    }
    const double p = 1.0 - beta;
    double prev = 0.0;  // j^p at j = 0
    for (std::size_t j = 0; j < n; ++j) {
        const double next = std::pow(static_cast<double>(j + 1), p);
        b[j] = next - prev;
        prev = next;
    }
    return b;
}

CaputoHistory::CaputoHistory(double dt, double beta) : dt_(dt), beta_(beta)
{
    if (!(dt > 0.0)) throw DomainError("CaputoHistory requires dt > 0");
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("CaputoHistory requires beta in (0, 1]");
    scale_ = std::pow(dt, -beta) / std::tgamma(2.0 - beta);
}

void CaputoHistory::push(std::vector<double> state)
{
    if (!values_.empty() && state.size() != values_.front().size()) {
        throw DomainError("CaputoHistory: state size changed");
    }
    values_.push_back(std::move(state));
}

double CaputoHistory::weight(std::size_t j) const
{
    if (j >= weights_.size()) weights_ = caputo_l1_weights(beta_, std::max<std::size_t>(2 * j + 2, 64));
    return weights_[j];
}

std::vector<double> CaputoHistory::memory_term() const
{
    if (values_.empty()) throw DomainError("CaputoHistory is empty");
    const std::size_t n = values_.size();  // next level
    std::vector<double> out(values_.front().size(), 0.0);
    if (beta_ == 1.0) return out;
    weight(n);
    for (std::size_t j = 1; j < n; ++j) {
        const double b = weights_[j];
        const auto& hi = values_[n - j];
        const auto& lo = values_[n - j - 1];
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b * (hi[i] - lo[i]);
    }
    return out;
}

std::vector<double> caputo_apply_discrete(const CaputoHistory& h)
{
    if (h.size() < 2) throw DomainError("caputo_apply_discrete needs at least one completed step");
    const std::size_t n = h.steps();
    std::vector<double> out(h.back().size(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double b = h.weight(j);
        if (b == 0.0) continue;
        const auto& hi = h.at(n - j);
        const auto& lo = h.at(n - j - 1);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b * (hi[i] - lo[i]);
    }
    for (auto& v : out) v *= h.scale();
    return out;
}

LaguerreState laguerre_start(std::vector<double> u0, const LaguerreRhs& rhs, double dt)
{
    if (!(dt > 0.0)) throw DomainError("laguerre_start requires dt > 0");
    std::vector<double> r(u0.size());
    rhs(0.0, u0, r);
    LaguerreState s;
    s.t = dt;
    s.u = std::move(u0);
    s.w.resize(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        s.u[i] += r[i] * dt;
        s.w[i] = r[i] * dt;
    }
    return s;
}

void laguerre_step(LaguerreState& s, const LaguerreRhs& rhs, double dt)
{
    if (!(dt > 0.0)) throw DomainError("laguerre_step requires dt > 0");
    if (!(s.t > 0.0)) throw DomainError("laguerre_step requires t > 0; use laguerre_start");
    constexpr double kGuard = 1e150;
    const std::size_t m = s.u.size();
    std::vector<double> ku[4], kw[4];
    std::vector<double> ut(m), wt(m), r(m);
    auto stage = [&](int k, double t, double frac) {
        for (std::size_t i = 0; i < m; ++i) {
            ut[i] = s.u[i] + (k ? frac * dt * ku[k - 1][i] : 0.0);
            wt[i] = s.w[i] + (k ? frac * dt * kw[k - 1][i] : 0.0);
        }
        rhs(t, ut, r);
        ku[k].resize(m);
        kw[k].resize(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double slope = wt[i] / t;
            if (!(std::abs(slope) < kGuard)) throw SolverError("Laguerre step overflow guard", static_cast<std::ptrdiff_t>(i), t);
            ku[k][i] = slope;
            kw[k][i] = r[i];
        }
    };
    stage(0, s.t, 0.0);
    stage(1, s.t + 0.5 * dt, 0.5);
    stage(2, s.t + 0.5 * dt, 0.5);
    stage(3, s.t + dt, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
        s.u[i] += dt / 6.0 * (ku[0][i] + 2.0 * ku[1][i] + 2.0 * ku[2][i] + ku[3][i]);
        s.w[i] += dt / 6.0 * (kw[0][i] + 2.0 * kw[1][i] + 2.0 * kw[2][i] + kw[3][i]);
    }
    s.t += dt;
}

}  // namespace hplab
