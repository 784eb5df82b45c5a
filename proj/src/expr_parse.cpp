#include "hplab/expr.hpp"

#include "hplab/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace hplab {

namespace {

const std::vector<std::string> kFunctionNames = {"sinh", "cosh", "tanh", "ln", "exp",
                                                 "sqrt", "pow",  "mittag", "besselc", "c0"};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

class Parser {
public:
    Parser(std::string_view src, const ParseOptions& opt) : src_(src), opt_(opt) {}

    Expr run()
    {
        Expr e = expr();
        skip_ws();
        if (pos_ != src_.size()) fail("unexpected trailing input", {"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected)
    {
        throw ParseError(msg, pos_, std::move(expected));
    }

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c)
    {
        skip_ws();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c, std::vector<std::string> expected)
    {
        if (!accept(c)) fail(std::string("expected '") + c + "'", std::move(expected));
    }

    Expr expr()
    {
        std::vector<Expr> terms{term()};
        for (;;) {
            if (accept('+')) {
                terms.push_back(term());
            } else if (accept('-')) {
                Expr r = term();
                Complex c;
                terms.push_back(is_constant(r, &c) ? ex::constant(-c) : ex::neg(std::move(r)));
            } else {
                break;
            }
        }
        return fold_or(std::move(terms), true);
    }

    // all-constant sums and products collapse to a literal
    static Expr fold_or(std::vector<Expr> items, bool sum)
    {
        Complex acc = sum ? Complex{0.0, 0.0} : Complex{1.0, 0.0};
        for (const auto& it : items) {
            Complex c;
            if (items.size() == 1 || !is_constant(it, &c)) return sum ? ex::add(std::move(items)) : ex::mul(std::move(items));
            acc = sum ? acc + c : acc * c;
        }
        return ex::constant(acc);
    }

    Expr term()
    {
        Expr acc = factor();
        std::vector<Expr> factors{acc};
        for (;;) {
            if (accept('*')) {
                factors.push_back(factor());
            } else if (accept('/')) {
                Expr d = factor();
                Complex c;
                if (is_constant(d, &c)) {
                    if (c == Complex{0.0, 0.0}) fail("division by literal zero", {});
                    factors.push_back(ex::constant(1.0 / c));
                } else {
                    factors.push_back(ex::pow(d, -1.0));
                }
            } else {
                break;
            }
        }
        return fold_or(std::move(factors), false);
    }

    Expr factor()
    {
        Expr base = unary();
        if (accept('^')) {
            Expr exponent = unary();
            return ex::pow(std::move(base), std::move(exponent));
        }
        return base;
    }

    Expr unary()
    {
        if (accept('-')) {
            Expr inner = unary();
            Complex c;
            if (is_constant(inner, &c)) return ex::constant(-c);
            return ex::neg(std::move(inner));
        }
        return atom();
    }

    Expr atom()
    {
        skip_ws();
        if (pos_ >= src_.size()) fail("unexpected end of input", {"NUMBER", "IDENT", "("});
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            Expr e = expr();
            expect(')', {")"});
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (is_ident_start(c)) return identifier();
        fail(std::string("unexpected character '") + c + "'", {"NUMBER", "IDENT", "("});
    }

    Expr number()
    {
        const char* first = src_.data() + pos_;
        const char* last = src_.data() + src_.size();
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(first, last, v);
        if (ec != std::errc() || !std::isfinite(v)) fail("malformed number", {"NUMBER"});
        pos_ += static_cast<std::size_t>(ptr - first);
        return ex::constant(v);
    }

    std::vector<Expr> call_args()
    {
        std::vector<Expr> args;
        expect('(', {"("});
        args.push_back(expr());
        while (accept(',')) args.push_back(expr());
        expect(')', {",", ")"});
        return args;
    }

    double constant_arg(const Expr& e, const char* what)
    {
        Complex c;
        if (!is_constant(e, &c) || c.imag() != 0.0) fail(std::string(what) + " must be a real constant", {"NUMBER"});
        return c.real();
    }

    Expr identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
        const std::string name(src_.substr(start, pos_ - start));

        const bool is_call = std::find(kFunctionNames.begin(), kFunctionNames.end(), name) != kFunctionNames.end()
                             || (opt_.operator_mode && name == "lap");
        if (is_call) {
            const std::size_t call_pos = start;
            auto args = call_args();
            auto arity = [&](std::size_t n) {
                if (args.size() != n) {
                    throw ParseError(name + " takes " + std::to_string(n) + " argument(s)", call_pos, {});
                }
            };
            if (name == "pow") {
                arity(2);
                return ex::pow(args[0], args[1]);
            }
            if (name == "mittag") {
                arity(2);
                const double beta = constant_arg(args[0], "mittag order");
                if (!(beta > 0.0 && beta <= 1.0)) throw ParseError("mittag order must lie in (0, 1]", call_pos, {});
                return ex::mittag(beta, args[1]);
            }
            if (name == "besselc") {
                arity(2);
                const double k = constant_arg(args[0], "besselc order");
                if (k < 0.0 || k != std::floor(k)) throw ParseError("besselc order must be a nonnegative integer", call_pos, {});
                return ex::clifford(static_cast<int>(k), args[1]);
            }
            arity(1);
            if (name == "c0") return ex::clifford(0, args[0]);
            if (name == "lap") return ex::lap(args[0]);
            static const std::pair<const char*, Func> table[] = {
                {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"tanh", Func::Tanh},
                {"ln", Func::Ln},     {"exp", Func::Exp},   {"sqrt", Func::Sqrt},
            };
            for (const auto& [n, f] : table) {
                if (name == n) return ex::fun(f, args[0]);
            }
        }
        if (name == "eta") return ex::eta();
        if (name == "t") return ex::t();
        if (name == "i") {
            if (!opt_.complex_mode) throw UnknownIdentifier("i (imaginary unit requires complex mode)", start);
            return ex::constant(Complex{0.0, 1.0});
        }
        if (opt_.operator_mode && name == "u") return ex::field();
        if (auto it = opt_.bindings.find(name); it != opt_.bindings.end()) return ex::constant(it->second);
        const bool listed = std::find(opt_.params.begin(), opt_.params.end(), name) != opt_.params.end();
        if (listed || opt_.allow_any_param) return ex::param(name);
        throw UnknownIdentifier(name, start);
    }

    std::string_view src_;
    const ParseOptions& opt_;
    std::size_t pos_ = 0;
};

std::string number_text(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s(buf);
    // shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) {
            s = buf;
            break;
        }
    }
    return s;
}

std::string const_text(Complex c)
{
    if (c.imag() == 0.0) {
        std::string s = number_text(c.real());
        return c.real() < 0.0 || std::signbit(c.real()) ? "(" + s + ")" : s;
    }
    std::string im = number_text(c.imag()) + "*i";
    if (c.real() == 0.0) return "(" + im + ")";
    return "(" + number_text(c.real()) + (c.imag() < 0.0 ? "" : "+") + im + ")";
}

// precedence: 1 sum, 2 product, 3 power, 4 atom
int precedence(const Expr& e)
{
    switch (e.kind()) {
    case NodeKind::Add: return 1;
    case NodeKind::Mul: return 2;
    case NodeKind::Pow: return 3;
    default: return 4;
    }
}

std::string print_at(const Expr& e, int min_prec)
{
    std::string s = print(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

const char* func_name(Func f)
{
    switch (f) {
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Ln: return "ln";
    case Func::Exp: return "exp";
    case Func::Sqrt: return "sqrt";
    }
    return "?";
}

}  // namespace

Expr parse(std::string_view src, const ParseOptions& options)
{
    return Parser(src, options).run();
}

std::string print(const Expr& e)
{
    const Node& n = e.node();
    switch (n.kind) {
    case NodeKind::Const: return const_text(n.value);
    case NodeKind::Var: return n.var == Var::Eta ? "eta" : "t";
    case NodeKind::Param: return n.name;
    case NodeKind::Field: return "u";
    case NodeKind::Add: {
        std::string s;
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) s += " + ";
            s += print_at(n.args[i], 2);
        }
        return s;
    }
    case NodeKind::Mul: {
        std::string s;
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) s += "*";
            s += print_at(n.args[i], 3);
        }
        return s;
    }
    case NodeKind::Pow: return print_at(n.args[0], 4) + "^" + print_at(n.args[1], 4);
    case NodeKind::Neg: return "(-" + print_at(n.args[0], 4) + ")";
    case NodeKind::Fun: return std::string(func_name(n.func)) + "(" + print(n.args[0]) + ")";
    case NodeKind::Mittag: return "mittag(" + number_text(n.order) + ", " + print(n.args[0]) + ")";
    case NodeKind::Clifford:
        return "besselc(" + std::to_string(static_cast<int>(n.order)) + ", " + print(n.args[0]) + ")";
    case NodeKind::Lap: return "lap(" + print(n.args[0]) + ")";
    }
    return "?";
}

}  // namespace hplab
