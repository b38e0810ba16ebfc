#pragma once

// Complex-valued coefficient formulas in the latent variables t1 and t2.
//
// Grammar, loosest binding first:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | ident | func '(' expr ')' | '(' expr ')'
//
// There is no implicit multiplication: `2t1` is rejected.

#include "polynomiogram/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>

namespace polynomiogram::expr {

using complex = std::complex<double>;

enum class Constant { I, Pi, E };
enum class Variable { T1, T2 };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Function { Exp, Log, Sin, Cos, Sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Literal
{
    double value;
};

struct Negate
{
    NodePtr operand;
};

struct Binary
{
    BinaryOp op;
    NodePtr lhs;
    NodePtr rhs;
};

struct Call
{
    Function fn;
    NodePtr arg;
};

struct Node
{
    std::variant<Literal, Constant, Variable, Negate, Binary, Call> value;
};

/// Immutable parsed formula. Copies share the same tree.
class CoefficientExpr
{
public:
    CoefficientExpr() = default;
    explicit CoefficientExpr(NodePtr root, std::string source = {})
        : root_(std::move(root)), source_(std::move(source))
    {
    }

    const Node& root() const { return *root_; }
    bool empty() const noexcept { return root_ == nullptr; }
    /// Text this tree was parsed from; empty for programmatic trees.
    const std::string& source() const noexcept { return source_; }

private:
    NodePtr root_;
    std::string source_;
};

namespace detail {

inline NodePtr make(auto&& v)
{
    return std::make_shared<const Node>(Node{std::forward<decltype(v)>(v)});
}

class Parser
{
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse()
    {
        skip_ws();
        if (pos_ == src_.size())
            throw ParseError(pos_, "empty expression");
        NodePtr n = parse_expr();
        skip_ws();
        if (pos_ != src_.size()) {
            if (src_[pos_] == ')')
                throw ParseError(pos_, "unbalanced ')'");
            throw ParseError(pos_, "unexpected '" + std::string(1, src_[pos_]) +
                                       "' (multiplication must be written with '*')");
        }
        return n;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    void skip_ws()
    {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            ++pos_;
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

    NodePtr parse_expr()
    {
        NodePtr lhs = parse_term();
        for (;;) {
            if (accept('+'))
                lhs = make(Binary{BinaryOp::Add, lhs, parse_term()});
            else if (accept('-'))
                lhs = make(Binary{BinaryOp::Sub, lhs, parse_term()});
            else
                return lhs;
        }
    }

    NodePtr parse_term()
    {
        NodePtr lhs = parse_unary();
        for (;;) {
            if (accept('*'))
                lhs = make(Binary{BinaryOp::Mul, lhs, parse_unary()});
            else if (accept('/'))
                lhs = make(Binary{BinaryOp::Div, lhs, parse_unary()});
            else
                return lhs;
        }
    }

    NodePtr parse_unary()
    {
        if (accept('-'))
            return make(Negate{parse_unary()});
        return parse_power();
    }

    NodePtr parse_power()
    {
        NodePtr base = parse_primary();
        if (accept('^'))
            return make(Binary{BinaryOp::Pow, base, parse_unary()});
        return base;
    }

    NodePtr parse_primary()
    {
        skip_ws();
        if (pos_ == src_.size())
            throw ParseError(pos_, "expected operand");
        const char c = src_[pos_];
        if (c == '(') {
            const std::size_t open = pos_++;
            NodePtr inner = parse_expr();
            if (!accept(')')) {
                skip_ws();
                throw ParseError(pos_, "unbalanced '(' opened at offset " + std::to_string(open));
            }
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
            return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_')
            return parse_identifier();
        throw ParseError(pos_, "expected operand, found '" + std::string(1, c) + "'");
    }

    NodePtr parse_number()
    {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                ++pos_;
                ++n;
            }
            return n;
        };
        std::size_t mantissa = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            mantissa += digits();
        }
        if (mantissa == 0)
            throw ParseError(start, "malformed number");
        // Exponent only when a digit follows, so `2e` stays `2` then the constant e.
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            std::size_t look = pos_ + 1;
            if (look < src_.size() && (src_[look] == '+' || src_[look] == '-'))
                ++look;
            if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
                pos_ = look;
                digits();
            }
        }
        double value = 0.0;
        const auto text = src_.substr(start, pos_ - start);
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
        if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value))
            throw ParseError(start, "numeric literal out of range");
        return make(Literal{value});
    }

    NodePtr parse_identifier()
    {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            ++pos_;
        const auto name = src_.substr(start, pos_ - start);

        if (name == "t1")
            return make(Variable::T1);
        if (name == "t2")
            return make(Variable::T2);
        if (name == "i")
            return make(Constant::I);
        if (name == "pi")
            return make(Constant::Pi);
        if (name == "e")
            return make(Constant::E);

        Function fn;
        if (name == "exp")
            fn = Function::Exp;
        else if (name == "log")
            fn = Function::Log;
        else if (name == "sin")
            fn = Function::Sin;
        else if (name == "cos")
            fn = Function::Cos;
        else if (name == "sqrt")
            fn = Function::Sqrt;
        else
            throw ParseError(start, "unknown identifier '" + std::string(name) + "'");

        skip_ws();
        if (pos_ == src_.size() || src_[pos_] != '(')
            throw ParseError(pos_, "expected '(' after function " + std::string(name));
        const std::size_t open = pos_++;
        NodePtr arg = parse_expr();
        if (!accept(')')) {
            skip_ws();
            throw ParseError(pos_, "unbalanced '(' opened at offset " + std::to_string(open));
        }
        return make(Call{fn, arg});
    }
};

inline const char* function_name(Function fn)
{
    switch (fn) {
    case Function::Exp: return "exp";
    case Function::Log: return "log";
    case Function::Sin: return "sin";
    case Function::Cos: return "cos";
    case Function::Sqrt: return "sqrt";
    }
    return "?";
}

inline char op_symbol(BinaryOp op)
{
    switch (op) {
    case BinaryOp::Add: return '+';
    case BinaryOp::Sub: return '-';
    case BinaryOp::Mul: return '*';
    case BinaryOp::Div: return '/';
    case BinaryOp::Pow: return '^';
    }
    return '?';
}

inline void serialize_into(const Node& n, std::string& out)
{
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Literal>) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%.17g", v.value);
                out += buf;
            } else if constexpr (std::is_same_v<T, Constant>) {
                out += v == Constant::I ? "i" : v == Constant::Pi ? "pi" : "e";
            } else if constexpr (std::is_same_v<T, Variable>) {
                out += v == Variable::T1 ? "t1" : "t2";
            } else if constexpr (std::is_same_v<T, Negate>) {
                out += "(-";
                serialize_into(*v.operand, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, Binary>) {
                out += '(';
                serialize_into(*v.lhs, out);
                out += ' ';
                out += op_symbol(v.op);
                out += ' ';
                serialize_into(*v.rhs, out);
                out += ')';
            } else {
                out += function_name(v.fn);
                out += '(';
                serialize_into(*v.arg, out);
                out += ')';
            }
        },
        n.value);
}

// Integer powers by repeated squaring avoid the branch cut of exp(k log z).
inline complex int_pow(complex base, long k)
{
    const bool invert = k < 0;
    unsigned long e = invert ? static_cast<unsigned long>(-k) : static_cast<unsigned long>(k);
    complex result{1.0, 0.0};
    while (e) {
        if (e & 1u)
            result *= base;
        base *= base;
        e >>= 1u;
    }
    if (invert) {
        if (result == complex{0.0, 0.0})
            throw EvalError("division by zero in negative power");
        result = complex{1.0, 0.0} / result;
    }
    return result;
}

inline complex eval_node(const Node& n, complex t1, complex t2)
{
    return std::visit(
        [&](const auto& v) -> complex {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Literal>) {
                return {v.value, 0.0};
            } else if constexpr (std::is_same_v<T, Constant>) {
                switch (v) {
                case Constant::I: return {0.0, 1.0};
                case Constant::Pi: return {std::numbers::pi, 0.0};
                case Constant::E: return {std::numbers::e, 0.0};
                }
                return {};
            } else if constexpr (std::is_same_v<T, Variable>) {
                return v == Variable::T1 ? t1 : t2;
            } else if constexpr (std::is_same_v<T, Negate>) {
                return -eval_node(*v.operand, t1, t2);
            } else if constexpr (std::is_same_v<T, Binary>) {
                const complex a = eval_node(*v.lhs, t1, t2);
                const complex b = eval_node(*v.rhs, t1, t2);
                switch (v.op) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div:
                    if (b == complex{0.0, 0.0})
                        throw EvalError("division by zero");
                    return a / b;
                case BinaryOp::Pow: {
                    if (b.imag() == 0.0 && std::abs(b.real()) <= 64.0 &&
                        b.real() == std::trunc(b.real()))
                        return int_pow(a, static_cast<long>(b.real()));
                    if (a == complex{0.0, 0.0}) {
                        if (b.real() > 0.0)
                            return {0.0, 0.0};
                        throw EvalError("log(0) in power with zero base");
                    }
                    return std::exp(b * std::log(a));
                }
                }
                return {};
            } else {
                const complex a = eval_node(*v.arg, t1, t2);
                switch (v.fn) {
                case Function::Exp: return std::exp(a);
                case Function::Log:
                    if (a == complex{0.0, 0.0})
                        throw EvalError("log(0)");
                    return std::log(a);
                case Function::Sin: return std::sin(a);
                case Function::Cos: return std::cos(a);
                case Function::Sqrt: return std::sqrt(a);
                }
                return {};
            }
        },
        n.value);
}

} // namespace detail

inline CoefficientExpr parse(std::string_view source)
{
    return CoefficientExpr(detail::Parser(source).parse(), std::string(source));
}

/// Concrete syntax that parses back to a structurally identical tree.
inline std::string serialize(const CoefficientExpr& e)
{
    std::string out;
    detail::serialize_into(e.root(), out);
    return out;
}

/// Principal branches throughout; throws EvalError on division by zero or log(0).
inline complex evaluate(const CoefficientExpr& e, complex t1, complex t2)
{
    return detail::eval_node(e.root(), t1, t2);
}

inline bool structurally_equal(const Node& a, const Node& b)
{
    if (a.value.index() != b.value.index())
        return false;
    return std::visit(
        [&](const auto& va) -> bool {
            using T = std::decay_t<decltype(va)>;
            const auto& vb = std::get<T>(b.value);
            if constexpr (std::is_same_v<T, Literal>)
                return va.value == vb.value;
            else if constexpr (std::is_same_v<T, Constant> || std::is_same_v<T, Variable>)
                return va == vb;
            else if constexpr (std::is_same_v<T, Negate>)
                return structurally_equal(*va.operand, *vb.operand);
            else if constexpr (std::is_same_v<T, Binary>)
                return va.op == vb.op && structurally_equal(*va.lhs, *vb.lhs) &&
                       structurally_equal(*va.rhs, *vb.rhs);
            else
                return va.fn == vb.fn && structurally_equal(*va.arg, *vb.arg);
        },
        a.value);
}

inline bool structurally_equal(const CoefficientExpr& a, const CoefficientExpr& b)
{
    return structurally_equal(a.root(), b.root());
}

} // namespace polynomiogram::expr
