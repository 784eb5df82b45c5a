#include "hplab/expr.hpp"

#include "hplab/error.hpp"
#include "hplab/specfun.hpp"

#include <cmath>

namespace hplab {

namespace {

template <class S>
S int_power(S base, long long k)
{
    if (k < 0) return S(1.0) / int_power(base, -k);
    S result(1.0);
    while (k) {
        if (k & 1) result *= base;
        base *= base;
        k >>= 1;
    }
    return result;
}

double real_arg(const Complex& z, const char* what)
{
    if (z.imag() != 0.0) throw DomainError(std::string(what) + " requires a real argument");
    return z.real();
}

template <class S>
struct Evaluator {
    const EvalPoint& p;
    const Bindings& bindings;

    static constexpr bool kReal = std::is_same_v<S, double>;

    S from_complex(const Complex& c) const
    {
        if constexpr (kReal) {
            if (c.imag() != 0.0) throw DomainError("complex value in real-mode evaluation");
            return c.real();
        } else {
            return c;
        }
    }

    S operator()(const Expr& e) const
    {
        const Node& n = e.node();
        switch (n.kind) {
        case NodeKind::Const:
            return from_complex(n.value);
        case NodeKind::Var:
            return S(n.var == Var::Eta ? p.eta : p.t);
        case NodeKind::Param: {
            auto it = bindings.find(n.name);
            if (it == bindings.end()) throw UnboundParameter(n.name);
            return from_complex(it->second);
        }
        case NodeKind::Field:
        case NodeKind::Lap:
            throw Error("cannot evaluate an unresolved operator template");
        case NodeKind::Add: {
            S s(0.0);
            for (const auto& a : n.args) s += (*this)(a);
            return s;
        }
        case NodeKind::Mul: {
            S s(1.0);
            for (const auto& a : n.args) s *= (*this)(a);
            return s;
        }
        case NodeKind::Neg:
            return -(*this)(n.args[0]);
        case NodeKind::Pow:
            return power((*this)(n.args[0]), n.args[1].node().value.real());
        case NodeKind::Fun:
            return function(n.func, (*this)(n.args[0]));
        case NodeKind::Mittag: {
            const double z = real_arg(Complex((*this)(n.args[0])), "mittag");
            return S(specfun::mittag_leffler(n.order, z));
        }
        case NodeKind::Clifford: {
            const double x = real_arg(Complex((*this)(n.args[0])), "besselc");
            return S(specfun::bessel_clifford(static_cast<int>(n.order), x));
        }
        }
        throw Error("evaluate: unknown node");
    }

    S power(S b, double c) const
    {
        if (c == std::floor(c) && std::abs(c) < 1e15) {
            if (c < 0 && b == S(0.0)) throw DomainError("zero raised to a negative power");
            return int_power(b, static_cast<long long>(c));
        }
        if constexpr (kReal) {
            if (b < 0.0 || (b == 0.0 && c < 0.0)) {
                throw DomainError("non-integer power of a nonpositive real base");
            }
            return std::pow(b, c);
        } else {
            if (b == S(0.0)) {
                if (c < 0) throw DomainError("zero raised to a negative power");
                return S(0.0);
            }
            return std::pow(b, c);
        }
    }

    S function(Func f, S a) const
    {
        switch (f) {
        case Func::Sinh: return std::sinh(a);
        case Func::Cosh: return std::cosh(a);
        case Func::Tanh: return std::tanh(a);
        case Func::Exp: return std::exp(a);
        case Func::Ln:
            if constexpr (kReal) {
                if (!(a > 0.0)) throw DomainError("ln of a nonpositive real");
            } else {
                if (a == S(0.0)) throw DomainError("ln of zero");
            }
            return std::log(a);
        case Func::Sqrt:
            if constexpr (kReal) {
                if (a < 0.0) throw DomainError("sqrt of a negative real");
            }
            return std::sqrt(a);
        }
        throw Error("evaluate: unknown function");
    }
};

void check_point(const EvalPoint& p)
{
    if (!(p.eta > 0.0)) throw DomainError("evaluation point requires eta > 0");
}

}  // namespace

double evaluate_real(const Expr& e, const EvalPoint& p, const Bindings& bindings)
{
    check_point(p);
    return Evaluator<double>{p, bindings}(e);
}

Complex evaluate_complex(const Expr& e, const EvalPoint& p, const Bindings& bindings)
{
    check_point(p);
    return Evaluator<Complex>{p, bindings}(e);
}

Complex evaluate(const Expr& e, const EvalPoint& p, const Bindings& bindings)
{
    if (p.mode == EvalMode::Real) return evaluate_real(e, p, bindings);
    return evaluate_complex(e, p, bindings);
}

}  // namespace hplab
