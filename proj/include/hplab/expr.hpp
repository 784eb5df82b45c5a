#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace hplab {

using Complex = std::complex<double>;

enum class Var { Eta, T };

enum class Func { Sinh, Cosh, Tanh, Ln, Exp, Sqrt };

enum class NodeKind {
    Const,
    Var,
    Param,    // named free parameter, bound at evaluation time
    Add,      // n-ary
    Mul,      // n-ary
    Pow,      // base ^ constant exponent
    Neg,
    Fun,
    Mittag,   // E_beta(arg), beta stored in `order`
    Clifford, // Bessel-Clifford C_k(arg), k stored in `order`
    Field,    // the unknown `u` of an operator template
    Lap,      // radial hyperbolic Laplacian of the child, unresolved
};

struct Node;

/// Immutable expression handle. Cheap to copy; subtrees are shared.
class Expr {
public:
    Expr();  // constant zero
    explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    const Node& node() const { return *node_; }
    NodeKind kind() const;

    // Structural identity (same tree shape and constants).
    bool same_as(const Expr& other) const;

private:
    std::shared_ptr<const Node> node_;
};

struct Node {
    NodeKind kind = NodeKind::Const;
    Complex value{};          // Const
    Var var = Var::Eta;       // Var
    Func func = Func::Exp;    // Fun
    double order = 0.0;       // Mittag beta, Clifford k
    std::string name;         // Param
    std::vector<Expr> args;   // children
};

/// Total order on trees, used for canonical sorting inside Add/Mul.
int compare(const Expr& a, const Expr& b);

namespace ex {

// Raw constructors (no simplification).
Expr constant(Complex c);
inline Expr constant(double c) { return constant(Complex{c, 0.0}); }
Expr var(Var v);
inline Expr eta() { return var(Var::Eta); }
inline Expr t() { return var(Var::T); }
Expr param(std::string name);
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
/// b^e. A non-constant exponent is rewritten as exp(e * ln b).
Expr pow(Expr base, Expr exponent);
Expr pow(Expr base, double exponent);
Expr neg(Expr e);
Expr fun(Func f, Expr arg);
Expr mittag(double beta, Expr arg);
Expr clifford(int order, Expr arg);
Expr field();
Expr lap(Expr arg);

inline Expr sinh(Expr a) { return fun(Func::Sinh, std::move(a)); }
inline Expr cosh(Expr a) { return fun(Func::Cosh, std::move(a)); }
inline Expr tanh(Expr a) { return fun(Func::Tanh, std::move(a)); }
inline Expr ln(Expr a) { return fun(Func::Ln, std::move(a)); }
inline Expr exp(Expr a) { return fun(Func::Exp, std::move(a)); }
inline Expr sqrt(Expr a) { return fun(Func::Sqrt, std::move(a)); }

}  // namespace ex

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

// ---------------------------------------------------------------------------
// Parsing and printing

struct ParseOptions {
    /// Accept the imaginary unit `i`.
    bool complex_mode = false;
    /// Accept `u` and `lap(.)` (operator templates).
    bool operator_mode = false;
    /// Names accepted as free parameters. Empty with `allow_any_param` lets
    /// any identifier through as a parameter.
    std::vector<std::string> params;
    bool allow_any_param = false;
    /// Parameters replaced by constants while parsing.
    std::map<std::string, Complex> bindings;
};

Expr parse(std::string_view src, const ParseOptions& options = {});

/// Text form that parses back to an equal-valued tree.
std::string print(const Expr& e);

// ---------------------------------------------------------------------------
// Calculus

/// Exact symbolic derivative. Mittag-Leffler nodes are differentiable only
/// for beta = 1.
Expr diff(const Expr& e, Var v);

/// (1/sinh eta) d/deta (sinh eta d/deta e), simplified.
Expr hyperbolic_laplacian(const Expr& e);

/// Fixed rewrite system applied to a fixed point (at most 64 passes):
/// constant folding, identity/zero elimination, like-term and like-factor
/// collection, tanh -> sinh/cosh, sinh(x)cosh(x) -> sinh(2x)/2.
Expr simplify(const Expr& e);

// ---------------------------------------------------------------------------
// Structure helpers

Expr substitute(const Expr& e, const std::string& param, const Expr& value);
Expr bind(const Expr& e, const std::map<std::string, Complex>& bindings);
/// Replace `u` by `u_value` and resolve every lap(.) node.
Expr apply_operator(const Expr& op_template, const Expr& u_value);

bool depends_on(const Expr& e, Var v);
bool has_field_or_lap(const Expr& e);
bool is_constant(const Expr& e, Complex* value = nullptr);

// ---------------------------------------------------------------------------
// Evaluation

enum class EvalMode { Real, Complex };

struct EvalPoint {
    double eta = 1.0;
    double t = 0.0;
    EvalMode mode = EvalMode::Real;
};

using Bindings = std::map<std::string, Complex>;

/// Real-mode evaluation; rejects complex constants and out-of-domain
/// arguments with DomainError.
double evaluate_real(const Expr& e, const EvalPoint& p, const Bindings& bindings = {});

/// Complex-mode evaluation with principal branches.
Complex evaluate_complex(const Expr& e, const EvalPoint& p, const Bindings& bindings = {});

/// Dispatches on p.mode; real results are returned with zero imaginary part.
Complex evaluate(const Expr& e, const EvalPoint& p, const Bindings& bindings = {});

}  // namespace hplab
