#include "hplab/expr.hpp"

#include "hplab/error.hpp"

#include <algorithm>
#include <cmath>

namespace hplab {

namespace {

using ex::constant;

bool is_zero(const Expr& e)
{
    Complex c;
    return is_constant(e, &c) && c == Complex{0.0, 0.0};
}

constexpr std::size_t kMaxExpansion = 64;

bool is_integer(double x) { return std::isfinite(x) && x == std::floor(x); }

double const_exponent(const Expr& pow_node) { return pow_node.node().args[1].node().value.real(); }

// ---------------------------------------------------------------------------
// Differentiation (raw; the caller simplifies)

Expr diff_raw(const Expr& e, Var v)
{
    const Node& n = e.node();
    switch (n.kind) {
    case NodeKind::Const:
    case NodeKind::Param:
        return constant(0.0);
    case NodeKind::Var:
        return constant(n.var == v ? 1.0 : 0.0);
    case NodeKind::Field:
    case NodeKind::Lap:
        throw Error("cannot differentiate an unresolved operator template");
    case NodeKind::Add: {
        std::vector<Expr> terms;
        for (const auto& a : n.args) terms.push_back(diff_raw(a, v));
        return ex::add(std::move(terms));
    }
    case NodeKind::Mul: {
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            Expr d = diff_raw(n.args[i], v);
            if (is_zero(d)) continue;
            std::vector<Expr> factors{d};
            for (std::size_t j = 0; j < n.args.size(); ++j) {
                if (j != i) factors.push_back(n.args[j]);
            }
            terms.push_back(ex::mul(std::move(factors)));
        }
        return ex::add(std::move(terms));
    }
    case NodeKind::Pow: {
        const Expr& b = n.args[0];
        const double c = const_exponent(e);
        Expr db = diff_raw(b, v);
        if (is_zero(db)) return constant(0.0);
        return ex::mul({constant(c), ex::pow(b, c - 1.0), db});
    }
    case NodeKind::Neg:
        return ex::neg(diff_raw(n.args[0], v));
    case NodeKind::Fun: {
        const Expr& a = n.args[0];
        Expr da = diff_raw(a, v);
        if (is_zero(da)) return constant(0.0);
        switch (n.func) {
        case Func::Sinh: return ex::mul({ex::cosh(a), da});
        case Func::Cosh: return ex::mul({ex::sinh(a), da});
        case Func::Tanh: return ex::mul({ex::pow(ex::cosh(a), -2.0), da});
        case Func::Ln: return ex::mul({ex::pow(a, -1.0), da});
        case Func::Exp: return ex::mul({e, da});
        case Func::Sqrt: return ex::mul({constant(0.5), ex::pow(e, -1.0), da});
        }
        break;
    }
    case NodeKind::Mittag: {
        const Expr& a = n.args[0];
        Expr da = diff_raw(a, v);
        if (is_zero(da)) return constant(0.0);
        if (n.order != 1.0) {
            throw DomainError("derivative of mittag(beta, .) with beta < 1 needs the two-parameter "
                              "Mittag-Leffler function, which is not supported");
        }
        return ex::mul({ex::exp(a), da});
    }
    case NodeKind::Clifford: {
        const Expr& a = n.args[0];
        Expr da = diff_raw(a, v);
        if (is_zero(da)) return constant(0.0);
        return ex::mul({ex::clifford(static_cast<int>(n.order) + 1, a), da});
    }
    }
    throw Error("diff: unknown node");
}

// ---------------------------------------------------------------------------
// Simplification

Expr simplify_once(const Expr& e);

// coefficient * rest
std::pair<Complex, Expr> split_coefficient(const Expr& term)
{
    if (term.kind() == NodeKind::Const) return {term.node().value, constant(1.0)};
    if (term.kind() == NodeKind::Mul) {
        const auto& args = term.node().args;
        Complex c{1.0, 0.0};
        std::vector<Expr> rest;
        for (const auto& a : args) {
            Complex k;
            if (is_constant(a, &k)) c *= k;
            else rest.push_back(a);
        }
        return {c, ex::mul(std::move(rest))};
    }
    return {Complex{1.0, 0.0}, term};
}

Expr simplify_add(std::vector<Expr> args)
{
    std::vector<Expr> flat;
    for (auto& a : args) {
        if (a.kind() == NodeKind::Add) {
            for (const auto& b : a.node().args) flat.push_back(b);
        } else {
            flat.push_back(std::move(a));
        }
    }
    Complex const_sum{0.0, 0.0};
    std::vector<std::pair<Expr, Complex>> groups;  // rest -> coefficient
    for (const auto& t : flat) {
        auto [c, rest] = split_coefficient(t);
        if (rest.kind() == NodeKind::Const) {
            const_sum += c * rest.node().value;
            continue;
        }
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const auto& g) { return compare(g.first, rest) == 0; });
        if (it == groups.end()) groups.emplace_back(rest, c);
        else it->second += c;
    }
    std::sort(groups.begin(), groups.end(),
              [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
    std::vector<Expr> out;
    for (auto& [rest, c] : groups) {
        if (c == Complex{0.0, 0.0}) continue;
        if (c == Complex{1.0, 0.0}) {
            out.push_back(rest);
        } else if (rest.kind() == NodeKind::Mul) {
            std::vector<Expr> f{constant(c)};
            for (const auto& a : rest.node().args) f.push_back(a);
            out.push_back(ex::mul(std::move(f)));
        } else {
            out.push_back(ex::mul({constant(c), rest}));
        }
    }
    if (const_sum != Complex{0.0, 0.0} || out.empty()) out.insert(out.begin(), constant(const_sum));
    return ex::add(std::move(out));
}

struct PowerTerm {
    Expr base;
    double exponent;
};

void add_power(std::vector<PowerTerm>& terms, const Expr& base, double exponent)
{
    auto it = std::find_if(terms.begin(), terms.end(),
                           [&](const PowerTerm& p) { return compare(p.base, base) == 0; });
    if (it == terms.end()) {
        terms.push_back({base, exponent});
        return;
    }
    const double sum = it->exponent + exponent;
    const double r = std::round(sum);
    // sums of rounded reciprocals (1/3 + 2/3) snap to the exact integer
    it->exponent = std::abs(sum - r) <= 2e-16 * (std::abs(it->exponent) + std::abs(exponent)) ? r : sum;
}

bool is_fun(const Expr& e, Func f) { return e.kind() == NodeKind::Fun && e.node().func == f; }

Expr make_power(const Expr& base, double exponent)
{
    if (exponent == 1.0) return base;
    return ex::pow(base, exponent);
}

Expr simplify_mul(std::vector<Expr> args)
{
    std::vector<Expr> flat;
    for (auto& a : args) {
        if (a.kind() == NodeKind::Mul) {
            for (const auto& b : a.node().args) flat.push_back(b);
        } else {
            flat.push_back(std::move(a));
        }
    }
    Complex coef{1.0, 0.0};
    std::vector<PowerTerm> powers;
    for (const auto& f : flat) {
        Complex c;
        if (is_constant(f, &c)) {
            coef *= c;
            continue;
        }
        Expr base = f;
        double p = 1.0;
        if (f.kind() == NodeKind::Pow) {
            base = f.node().args[0];
            p = const_exponent(f);
        }
        if (is_fun(base, Func::Tanh) && is_integer(p)) {
            const Expr& a = base.node().args[0];
            add_power(powers, ex::sinh(a), p);
            add_power(powers, ex::cosh(a), -p);
        } else {
            add_power(powers, base, p);
        }
    }
    if (coef == Complex{0.0, 0.0}) return constant(0.0);

    // sinh(a)^m cosh(a)^m -> 2^-m sinh(2a)^m for integer m of a common sign
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (!is_fun(powers[i].base, Func::Sinh)) continue;
        const Expr& a = powers[i].base.node().args[0];
        for (std::size_t j = 0; j < powers.size(); ++j) {
            if (!is_fun(powers[j].base, Func::Cosh) || compare(powers[j].base.node().args[0], a) != 0) continue;
            const double p = powers[i].exponent;
            const double q = powers[j].exponent;
            if (!is_integer(p) || !is_integer(q) || p * q <= 0.0) continue;
            const double m = p > 0 ? std::min(p, q) : std::max(p, q);
            powers[i].exponent -= m;
            powers[j].exponent -= m;
            coef *= std::pow(2.0, -m);
            Expr doubled = simplify(ex::mul({constant(2.0), a}));
            add_power(powers, ex::sinh(doubled), m);
            break;
        }
    }

    std::vector<PowerTerm> kept;
    for (auto& p : powers) {
        if (p.exponent != 0.0) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end(),
              [](const PowerTerm& a, const PowerTerm& b) { return compare(a.base, b.base) < 0; });
    // distribute over a plain sum factor when the expansion stays small
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i].base.kind() != NodeKind::Add || kept[i].exponent != 1.0) continue;
        const auto& terms = kept[i].base.node().args;
        if (terms.size() > kMaxExpansion) break;
        std::vector<Expr> expanded;
        for (const auto& term : terms) {
            std::vector<Expr> f{constant(coef), term};
            for (std::size_t j = 0; j < kept.size(); ++j) {
                if (j != i) f.push_back(make_power(kept[j].base, kept[j].exponent));
            }
            expanded.push_back(simplify_mul(std::move(f)));
        }
        return simplify_add(std::move(expanded));
    }

    std::vector<Expr> out;
    if (coef != Complex{1.0, 0.0} || kept.empty()) out.push_back(constant(coef));
    for (const auto& p : kept) out.push_back(make_power(p.base, p.exponent));
    return ex::mul(std::move(out));
}

Expr simplify_pow(const Expr& base, double c)
{
    // products of reciprocal exponents such as (1/3)*3 land on the integer
    if (const double r = std::round(c); r != c && std::abs(c - r) <= 4e-16 * std::abs(c)) c = r;
    if (c == 0.0) return constant(1.0);
    if (c == 1.0) return base;
    Complex b;
    if (is_constant(base, &b)) {
        if (is_integer(c)) return constant(std::pow(b, static_cast<int>(c)));
        if (b.imag() == 0.0 && b.real() > 0.0) return constant(std::pow(b.real(), c));
        return ex::pow(base, c);
    }
    // (k x)^c = k^c x^c for a positive real constant k on every branch
    if (base.kind() == NodeKind::Mul && !is_integer(c)) {
        Complex k;
        const auto& f = base.node().args;
        if (is_constant(f.front(), &k) && k.imag() == 0.0 && k.real() > 0.0) {
            std::vector<Expr> rest(f.begin() + 1, f.end());
            return simplify_mul({constant(std::pow(k.real(), c)), ex::pow(ex::mul(std::move(rest)), c)});
        }
    }
    if (is_integer(c)) {
        if (base.kind() == NodeKind::Pow) return simplify_pow(base.node().args[0], const_exponent(base) * c);
        if (base.kind() == NodeKind::Mul || is_fun(base, Func::Tanh)) {
            std::vector<Expr> f;
            if (base.kind() == NodeKind::Mul) {
                for (const auto& a : base.node().args) f.push_back(ex::pow(a, c));
            } else {
                f.push_back(ex::pow(base, c));
            }
            return simplify_mul(std::move(f));
        }
        if (is_fun(base, Func::Sqrt) && is_integer(c / 2.0)) {
            return simplify_pow(base.node().args[0], c / 2.0);
        }
    }
    return ex::pow(base, c);
}

Expr simplify_fun(Func f, const Expr& a)
{
    Complex c;
    if (is_constant(a, &c) && c.imag() == 0.0) {
        const double x = c.real();
        switch (f) {
        case Func::Sinh: return constant(std::sinh(x));
        case Func::Cosh: return constant(std::cosh(x));
        case Func::Tanh: return constant(std::tanh(x));
        case Func::Exp: return constant(std::exp(x));
        case Func::Ln:
            if (x > 0.0) return constant(std::log(x));
            break;
        case Func::Sqrt:
            if (x >= 0.0) return constant(std::sqrt(x));
            break;
        }
    }
    if (f == Func::Exp && is_fun(a, Func::Ln)) return a.node().args[0];
    return ex::fun(f, a);
}

Expr simplify_once(const Expr& e)
{
    const Node& n = e.node();
    std::vector<Expr> args;
    args.reserve(n.args.size());
    for (const auto& a : n.args) args.push_back(simplify_once(a));

    switch (n.kind) {
    case NodeKind::Const:
    case NodeKind::Var:
    case NodeKind::Param:
    case NodeKind::Field:
        return e;
    case NodeKind::Add:
        return simplify_add(std::move(args));
    case NodeKind::Mul:
        return simplify_mul(std::move(args));
    case NodeKind::Neg:
        return simplify_mul({constant(-1.0), args[0]});
    case NodeKind::Pow:
        return simplify_pow(args[0], const_exponent(e));
    case NodeKind::Fun:
        return simplify_fun(n.func, args[0]);
    case NodeKind::Mittag:
        if (is_zero(args[0])) return constant(1.0);
        return ex::mittag(n.order, args[0]);
    case NodeKind::Clifford:
        return ex::clifford(static_cast<int>(n.order), args[0]);
    case NodeKind::Lap:
        return ex::lap(args[0]);
    }
    return e;
}

}  // namespace

Expr simplify(const Expr& e)
{
    Expr cur = e;
    for (int pass = 0; pass < 64; ++pass) {
        Expr next = simplify_once(cur);
        if (compare(next, cur) == 0) return next;
        cur = std::move(next);
    }
    return cur;
}

Expr diff(const Expr& e, Var v) { return simplify(diff_raw(e, v)); }

Expr hyperbolic_laplacian(const Expr& e)
{
    const Expr s = ex::sinh(ex::eta());
    Expr flux = simplify(ex::mul({s, diff(e, Var::Eta)}));
    return simplify(ex::mul({ex::pow(s, -1.0), diff(flux, Var::Eta)}));
}

}  // namespace hplab
