#include "hplab/expr.hpp"

#include "hplab/error.hpp"

#include <algorithm>
#include <cmath>

namespace hplab {

namespace {

std::shared_ptr<Node> make(NodeKind kind)
{
    auto n = std::make_shared<Node>();
    n->kind = kind;
    return n;
}

int cmp_double(double a, double b)
{
    if (a < b) return -1;
    if (a > b) return 1;
    return 0;
}

}  // namespace

Expr::Expr() : node_(std::make_shared<const Node>()) {}

NodeKind Expr::kind() const { return node_->kind; }

bool Expr::same_as(const Expr& other) const
{
    return node_ == other.node_ || compare(*this, other) == 0;
}

int compare(const Expr& a, const Expr& b)
{
    const Node& x = a.node();
    const Node& y = b.node();
    if (&x == &y) return 0;
    if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind) ? -1 : 1;
    switch (x.kind) {
    case NodeKind::Const:
        if (int c = cmp_double(x.value.real(), y.value.real())) return c;
        return cmp_double(x.value.imag(), y.value.imag());
    case NodeKind::Var:
        return cmp_double(static_cast<int>(x.var), static_cast<int>(y.var));
    case NodeKind::Param:
        return x.name.compare(y.name) < 0 ? -1 : (x.name == y.name ? 0 : 1);
    case NodeKind::Fun:
        if (x.func != y.func) return static_cast<int>(x.func) < static_cast<int>(y.func) ? -1 : 1;
        break;
    case NodeKind::Mittag:
    case NodeKind::Clifford:
        if (int c = cmp_double(x.order, y.order)) return c;
        break;
    default:
        break;
    }
    if (x.args.size() != y.args.size()) return x.args.size() < y.args.size() ? -1 : 1;
    for (std::size_t i = 0; i < x.args.size(); ++i) {
        if (int c = compare(x.args[i], y.args[i])) return c;
    }
    return 0;
}

namespace ex {

Expr constant(Complex c)
{
    auto n = make(NodeKind::Const);
    n->value = c;
    return Expr(std::move(n));
}

Expr var(Var v)
{
    auto n = make(NodeKind::Var);
    n->var = v;
    return Expr(std::move(n));
}

Expr param(std::string name)
{
    auto n = make(NodeKind::Param);
    n->name = std::move(name);
    return Expr(std::move(n));
}

Expr add(std::vector<Expr> terms)
{
    if (terms.empty()) return constant(0.0);
    if (terms.size() == 1) return terms.front();
    auto n = make(NodeKind::Add);
    n->args = std::move(terms);
    return Expr(std::move(n));
}

Expr mul(std::vector<Expr> factors)
{
    if (factors.empty()) return constant(1.0);
    if (factors.size() == 1) return factors.front();
    auto n = make(NodeKind::Mul);
    n->args = std::move(factors);
    return Expr(std::move(n));
}

Expr pow(Expr base, Expr exponent)
{
    Complex c;
    if (!is_constant(exponent, &c) || c.imag() != 0.0) {
        return exp(mul({std::move(exponent), ln(std::move(base))}));
    }
    auto n = make(NodeKind::Pow);
    n->args = {std::move(base), std::move(exponent)};
    return Expr(std::move(n));
}

Expr pow(Expr base, double exponent) { return pow(std::move(base), constant(exponent)); }

Expr neg(Expr e)
{
    auto n = make(NodeKind::Neg);
    n->args = {std::move(e)};
    return Expr(std::move(n));
}

Expr fun(Func f, Expr arg)
{
    auto n = make(NodeKind::Fun);
    n->func = f;
    n->args = {std::move(arg)};
    return Expr(std::move(n));
}

Expr mittag(double beta, Expr arg)
{
    if (!(beta > 0.0 && beta <= 1.0)) throw DomainError("mittag order must lie in (0, 1]");
    auto n = make(NodeKind::Mittag);
    n->order = beta;
    n->args = {std::move(arg)};
    return Expr(std::move(n));
}

Expr clifford(int order, Expr arg)
{
    if (order < 0) throw DomainError("Bessel-Clifford order must be nonnegative");
    auto n = make(NodeKind::Clifford);
    n->order = order;
    n->args = {std::move(arg)};
    return Expr(std::move(n));
}

Expr field() { return Expr(make(NodeKind::Field)); }

Expr lap(Expr arg)
{
    auto n = make(NodeKind::Lap);
    n->args = {std::move(arg)};
    return Expr(std::move(n));
}

}  // namespace ex

Expr operator+(const Expr& a, const Expr& b) { return ex::add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return ex::add({a, ex::neg(b)}); }
Expr operator*(const Expr& a, const Expr& b) { return ex::mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b)
{
    Complex c;
    if (is_constant(b, &c)) return ex::mul({a, ex::constant(1.0 / c)});
    return ex::mul({a, ex::pow(b, -1.0)});
}
Expr operator-(const Expr& a) { return ex::neg(a); }

bool is_constant(const Expr& e, Complex* value)
{
    if (e.kind() != NodeKind::Const) return false;
    if (value) *value = e.node().value;
    return true;
}

namespace {

template <class F>
Expr rebuild(const Expr& e, F&& child_map)
{
    const Node& n = e.node();
    if (n.args.empty()) return e;
    auto copy = std::make_shared<Node>(n);
    bool changed = false;
    for (auto& a : copy->args) {
        Expr r = child_map(a);
        if (&r.node() != &a.node()) changed = true;
        a = std::move(r);
    }
    if (!changed) return e;
    return Expr(std::move(copy));
}

}  // namespace

Expr substitute(const Expr& e, const std::string& param, const Expr& value)
{
    if (e.kind() == NodeKind::Param && e.node().name == param) return value;
    return rebuild(e, [&](const Expr& c) { return substitute(c, param, value); });
}

Expr bind(const Expr& e, const std::map<std::string, Complex>& bindings)
{
    if (e.kind() == NodeKind::Param) {
        auto it = bindings.find(e.node().name);
        return it == bindings.end() ? e : ex::constant(it->second);
    }
    return rebuild(e, [&](const Expr& c) { return bind(c, bindings); });
}

Expr apply_operator(const Expr& op_template, const Expr& u_value)
{
    switch (op_template.kind()) {
    case NodeKind::Field:
        return u_value;
    case NodeKind::Lap:
        return hyperbolic_laplacian(apply_operator(op_template.node().args[0], u_value));
    default:
        return rebuild(op_template, [&](const Expr& c) { return apply_operator(c, u_value); });
    }
}

bool depends_on(const Expr& e, Var v)
{
    const Node& n = e.node();
    if (n.kind == NodeKind::Var) return n.var == v;
    if (n.kind == NodeKind::Field || n.kind == NodeKind::Lap) return true;
    return std::any_of(n.args.begin(), n.args.end(), [&](const Expr& a) { return depends_on(a, v); });
}

bool has_field_or_lap(const Expr& e)
{
    const Node& n = e.node();
    if (n.kind == NodeKind::Field || n.kind == NodeKind::Lap) return true;
    return std::any_of(n.args.begin(), n.args.end(), [](const Expr& a) { return has_field_or_lap(a); });
}

}  // namespace hplab
