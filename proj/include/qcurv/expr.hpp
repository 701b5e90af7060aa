#pragma once

// Small arithmetic-expression engine: parse, evaluate, differentiate.
// Grammar: + - * / ^ (right assoc), unary minus, parentheses, the
// functions exp ln log sin cos tanh sqrt, constants pi and e, and
// variables x1..x9.  Differentiation is symbolic, so model gradients are
// exact to roundoff for any user-supplied expression.

#include <cctype>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "qcurv/errors.hpp"

namespace qcurv::expr {

namespace ast {

enum class Op { add, sub, mul, div, pow };
enum class Fn { neg, exp, log, sin, cos, tanh, sqrt };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
    enum class Kind { constant, variable, unary, binary } kind;
    double value = 0;   // constant
    int var = 0;        // variable index (0-based)
    Fn fn = Fn::neg;    // unary
    Op op = Op::add;    // binary
    NodePtr a, b;
};

inline NodePtr constant(double v) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::constant;
    n->value = v;
    return n;
}

inline NodePtr variable(int i) {
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::variable;
    n->var = i;
    return n;
}

inline bool is_const(const NodePtr& n, double v) {
    return n->kind == Node::Kind::constant && n->value == v;
}

inline NodePtr unary(Fn fn, NodePtr a);
inline NodePtr binary(Op op, NodePtr a, NodePtr b);

// light constant folding keeps derivative trees small
inline NodePtr binary(Op op, NodePtr a, NodePtr b) {
    if (a->kind == Node::Kind::constant && b->kind == Node::Kind::constant) {
        switch (op) {
            case Op::add: return constant(a->value + b->value);
            case Op::sub: return constant(a->value - b->value);
            case Op::mul: return constant(a->value * b->value);
            case Op::div: return constant(a->value / b->value);
            case Op::pow: return constant(std::pow(a->value, b->value));
        }
    }
    switch (op) {
        case Op::add:
            if (is_const(a, 0)) return b;
            if (is_const(b, 0)) return a;
            break;
        case Op::sub:
            if (is_const(b, 0)) return a;
            break;
        case Op::mul:
            if (is_const(a, 0) || is_const(b, 0)) return constant(0);
            if (is_const(a, 1)) return b;
            if (is_const(b, 1)) return a;
            break;
        case Op::div:
            if (is_const(a, 0)) return constant(0);
            if (is_const(b, 1)) return a;
            break;
        case Op::pow:
            if (is_const(b, 1)) return a;
            if (is_const(b, 0)) return constant(1);
            break;
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::binary;
    n->op = op;
    n->a = std::move(a);
    n->b = std::move(b);
    return n;
}

inline NodePtr unary(Fn fn, NodePtr a) {
    if (a->kind == Node::Kind::constant) {
        switch (fn) {
            case Fn::neg: return constant(-a->value);
            case Fn::exp: return constant(std::exp(a->value));
            case Fn::log: return constant(std::log(a->value));
            case Fn::sin: return constant(std::sin(a->value));
            case Fn::cos: return constant(std::cos(a->value));
            case Fn::tanh: return constant(std::tanh(a->value));
            case Fn::sqrt: return constant(std::sqrt(a->value));
        }
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::unary;
    n->fn = fn;
    n->a = std::move(a);
    return n;
}

inline double evaluate(const Node& n, std::span<const double> vars) {
    switch (n.kind) {
        case Node::Kind::constant: return n.value;
        case Node::Kind::variable:
            if (n.var >= (int)vars.size())
                throw std::domain_error("expression: variable x" + std::to_string(n.var + 1) +
                                        " not bound");
            return vars[n.var];
        case Node::Kind::unary: {
            double a = evaluate(*n.a, vars);
            switch (n.fn) {
                case Fn::neg: return -a;
                case Fn::exp: return std::exp(a);
                case Fn::log: return std::log(a);
                case Fn::sin: return std::sin(a);
                case Fn::cos: return std::cos(a);
                case Fn::tanh: return std::tanh(a);
                case Fn::sqrt: return std::sqrt(a);
            }
            break;
        }
        case Node::Kind::binary: {
            double a = evaluate(*n.a, vars), b = evaluate(*n.b, vars);
            switch (n.op) {
                case Op::add: return a + b;
                case Op::sub: return a - b;
                case Op::mul: return a * b;
                case Op::div: return a / b;
                case Op::pow: return std::pow(a, b);
            }
            break;
        }
    }
    return 0;
}

inline NodePtr derivative(const NodePtr& n, int var) {
    switch (n->kind) {
        case Node::Kind::constant: return constant(0);
        case Node::Kind::variable: return constant(n->var == var ? 1 : 0);
        case Node::Kind::unary: {
            auto da = derivative(n->a, var);
            switch (n->fn) {
                case Fn::neg: return unary(Fn::neg, da);
                case Fn::exp: return binary(Op::mul, unary(Fn::exp, n->a), da);
                case Fn::log: return binary(Op::div, da, n->a);
                case Fn::sin: return binary(Op::mul, unary(Fn::cos, n->a), da);
                case Fn::cos:
                    return unary(Fn::neg, binary(Op::mul, unary(Fn::sin, n->a), da));
                case Fn::tanh: {
                    auto t = unary(Fn::tanh, n->a);
                    auto sech2 = binary(Op::sub, constant(1), binary(Op::mul, t, t));
                    return binary(Op::mul, sech2, da);
                }
                case Fn::sqrt:
                    return binary(Op::div, da,
                                  binary(Op::mul, constant(2), unary(Fn::sqrt, n->a)));
            }
            break;
        }
        case Node::Kind::binary: {
            auto da = derivative(n->a, var);
            auto db = derivative(n->b, var);
            switch (n->op) {
                case Op::add: return binary(Op::add, da, db);
                case Op::sub: return binary(Op::sub, da, db);
                case Op::mul:
                    return binary(Op::add, binary(Op::mul, da, n->b),
                                  binary(Op::mul, n->a, db));
                case Op::div: {
                    auto num = binary(Op::sub, binary(Op::mul, da, n->b),
                                      binary(Op::mul, n->a, db));
                    return binary(Op::div, num, binary(Op::mul, n->b, n->b));
                }
                case Op::pow: {
                    if (n->b->kind == Node::Kind::constant) {
                        // c f^{c-1} f'
                        auto c = n->b->value;
                        auto p = binary(Op::pow, n->a, constant(c - 1));
                        return binary(Op::mul, binary(Op::mul, constant(c), p), da);
                    }
                    // f^g (g' ln f + g f'/f)
                    auto self = binary(Op::pow, n->a, n->b);
                    auto t1 = binary(Op::mul, db, unary(Fn::log, n->a));
                    auto t2 = binary(Op::mul, n->b, binary(Op::div, da, n->a));
                    return binary(Op::mul, self, binary(Op::add, t1, t2));
                }
            }
            break;
        }
    }
    return constant(0);
}

} // namespace ast

namespace detail {

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    ast::NodePtr parse() {
        auto e = expression();
        skip_ws();
        if (pos_ != s_.size())
            throw data_error("expression: trailing input at position " + std::to_string(pos_));
        return e;
    }

private:
    ast::NodePtr expression() {
        auto lhs = term();
        for (;;) {
            skip_ws();
            if (match('+')) lhs = ast::binary(ast::Op::add, lhs, term());
            else if (match('-')) lhs = ast::binary(ast::Op::sub, lhs, term());
            else return lhs;
        }
    }

    ast::NodePtr term() {
        auto lhs = factor();
        for (;;) {
            skip_ws();
            if (match('*')) lhs = ast::binary(ast::Op::mul, lhs, factor());
            else if (match('/')) lhs = ast::binary(ast::Op::div, lhs, factor());
            else return lhs;
        }
    }

    // unary minus binds looser than ^, so -x^2 means -(x^2)
    ast::NodePtr factor() {
        skip_ws();
        if (match('-')) return ast::unary(ast::Fn::neg, factor());
        if (match('+')) return factor();
        return power();
    }

    ast::NodePtr power() {
        auto base = primary();
        skip_ws();
        if (match('^')) return ast::binary(ast::Op::pow, base, factor()); // right assoc
        return base;
    }

    ast::NodePtr primary() {
        skip_ws();
        if (match('(')) {
            auto e = expression();
            expect(')');
            return e;
        }
        if (pos_ < s_.size() && (std::isdigit((unsigned char)s_[pos_]) || s_[pos_] == '.'))
            return number();
        if (pos_ < s_.size() && std::isalpha((unsigned char)s_[pos_])) return identifier();
        throw data_error("expression: unexpected character at position " + std::to_string(pos_));
    }

    ast::NodePtr number() {
        size_t end = pos_;
        while (end < s_.size() &&
               (std::isdigit((unsigned char)s_[end]) || s_[end] == '.' || s_[end] == 'e' ||
                s_[end] == 'E' ||
                ((s_[end] == '+' || s_[end] == '-') && end > pos_ &&
                 (s_[end - 1] == 'e' || s_[end - 1] == 'E'))))
            ++end;
        double v = std::stod(std::string(s_.substr(pos_, end - pos_)));
        pos_ = end;
        return ast::constant(v);
    }

    ast::NodePtr identifier() {
        size_t end = pos_;
        while (end < s_.size() &&
               (std::isalnum((unsigned char)s_[end]) || s_[end] == '_'))
            ++end;
        std::string name(s_.substr(pos_, end - pos_));
        pos_ = end;

        if (name == "pi") return ast::constant(3.14159265358979323846);
        if (name == "e") return ast::constant(2.71828182845904523536);
        if (name.size() >= 2 && name[0] == 'x' && std::isdigit((unsigned char)name[1])) {
            int idx = std::stoi(name.substr(1));
            if (idx < 1 || idx > 9) throw data_error("expression: variable out of range: " + name);
            return ast::variable(idx - 1);
        }

        skip_ws();
        expect('(');
        auto arg = expression();
        expect(')');
        if (name == "exp") return ast::unary(ast::Fn::exp, arg);
        if (name == "ln" || name == "log") return ast::unary(ast::Fn::log, arg);
        if (name == "sin") return ast::unary(ast::Fn::sin, arg);
        if (name == "cos") return ast::unary(ast::Fn::cos, arg);
        if (name == "tanh") return ast::unary(ast::Fn::tanh, arg);
        if (name == "sqrt") return ast::unary(ast::Fn::sqrt, arg);
        throw data_error("expression: unknown function '" + name + "'");
    }

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    bool match(char c) {
        if (pos_ < s_.size() && s_[pos_] == c) { ++pos_; return true; }
        return false;
    }
    void expect(char c) {
        skip_ws();
        if (!match(c))
            throw data_error(std::string("expression: expected '") + c + "' at position " +
                             std::to_string(pos_));
    }

    std::string_view s_;
    size_t pos_ = 0;
};

} // namespace detail

/// Parsed expression in variables x1..x9 with exact differentiation.
class Expression {
public:
    Expression() : root_(ast::constant(0)) {}

    static Expression parse(std::string_view text) {
        return Expression(detail::Parser(text).parse(), std::string(text));
    }

    static Expression constant(double v) { return Expression(ast::constant(v), ""); }

    double operator()(std::span<const double> vars) const { return ast::evaluate(*root_, vars); }

    /// d/dx_{i+1} as a new expression.
    Expression derivative(int var) const {
        return Expression(ast::derivative(root_, var), source_.empty() ? "" : "d(" + source_ + ")");
    }

    const std::string& source() const { return source_; }

private:
    Expression(ast::NodePtr root, std::string source)
        : root_(std::move(root)), source_(std::move(source)) {}

    ast::NodePtr root_;
    std::string source_;
};

} // namespace qcurv::expr
