#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hhbounds/box.hpp"
#include "hhbounds/errors.hpp"

namespace hhbounds {

enum class BinaryOp { add, sub, mul, div, pow };
enum class FuncOp { exp, abs, sqrt, max, min };

// A scalar function of x1..xn as a parsed expression tree. Trees are
// immutable and cheap to copy; parsing and evaluation are pure.
//
// Grammar (whitespace between tokens is ignored):
//
//   expr    := term (("+"|"-") term)*
//   term    := unary (("*"|"/") unary)*
//   unary   := "-" unary | power
//   power   := primary ("^" unary)?          right-associative
//   primary := NUMBER | VAR | FUNC "(" expr ("," expr)* ")" | "(" expr ")"
//   VAR     := "x" [1-9][0-9]*
//   FUNC    := "exp" | "abs" | "sqrt" | "max" | "min"
//
// "^" binds tighter than unary minus: -x1^2 parses as -(x1^2).
// NUMBER is an unsigned decimal literal with optional fraction and exponent.
class Expr {
    struct Node;
    using NodeRef = std::shared_ptr<const Node>;

    struct Node {
        enum class Kind { number, variable, negate, binary, call };
        Kind kind;
        double value = 0.0;  // number
        int var_index = 0;   // variable, 1-based
        BinaryOp op{};       // binary
        FuncOp func{};       // call
        std::vector<NodeRef> children;
    };

public:
    static Expr parse(std::string_view source) { return Expr(Parser(source).run()); }

    double evaluate(const Vector& point) const { return eval_node(*root_, point); }
    double operator()(const Vector& point) const { return evaluate(point); }

    // Largest variable index referenced; 0 when the expression is constant.
    int max_var_index() const { return max_var(*root_); }

    // Fully parenthesized form; reparsing it reproduces the identical tree.
    std::string to_string() const {
        std::string out;
        print_node(*root_, out);
        return out;
    }

    static bool equal(const Expr& a, const Expr& b) { return node_equal(*a.root_, *b.root_); }

private:
    explicit Expr(NodeRef root) : root_(std::move(root)) {}

    NodeRef root_;

    // ---- tokens ----

    struct Token {
        enum class Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, comma, end };
        Kind kind;
        SourceSpan span;
        double num = 0.0;
        std::string_view text;
    };

    class Parser {
    public:
        explicit Parser(std::string_view src) : src_(src) { tokenize(); }

        NodeRef run() {
            NodeRef e = parse_expr(0);
            if (peek().kind != Token::Kind::end)
                throw ParseError("unexpected trailing input", peek().span);
            return e;
        }

    private:
        static constexpr int max_depth = 1000;

        std::string_view src_;
        std::vector<Token> tokens_;
        std::size_t pos_ = 0;

        [[noreturn]] void fail(const std::string& msg, SourceSpan span) const {
            throw ParseError(msg, span);
        }

        void tokenize() {
            std::size_t i = 0;
            const std::size_t n = src_.size();
            while (i < n) {
                char c = src_[i];
                if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                    ++i;
                    continue;
                }
                std::size_t start = i;
                if (std::isdigit(static_cast<unsigned char>(c))) {
                    while (i < n && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
                    if (i < n && src_[i] == '.') {
                        ++i;
                        if (i >= n || !std::isdigit(static_cast<unsigned char>(src_[i])))
                            fail("expected digits after the decimal point", {start, i});
                        while (i < n && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
                    }
                    if (i < n && (src_[i] == 'e' || src_[i] == 'E')) {
                        std::size_t e = i + 1;
                        if (e < n && (src_[e] == '+' || src_[e] == '-')) ++e;
                        if (e >= n || !std::isdigit(static_cast<unsigned char>(src_[e])))
                            fail("malformed exponent in number literal", {start, e});
                        i = e;
                        while (i < n && std::isdigit(static_cast<unsigned char>(src_[i]))) ++i;
                    }
                    std::string text(src_.substr(start, i - start));
                    char* endp = nullptr;
                    double v = std::strtod(text.c_str(), &endp);
                    if (endp != text.c_str() + text.size() || !std::isfinite(v))
                        fail("number literal out of range", {start, i});
                    tokens_.push_back({Token::Kind::number, {start, i}, v, {}});
                    continue;
                }
                if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                    while (i < n && (std::isalnum(static_cast<unsigned char>(src_[i])) || src_[i] == '_'))
                        ++i;
                    tokens_.push_back(
                        {Token::Kind::ident, {start, i}, 0.0, src_.substr(start, i - start)});
                    continue;
                }
                Token::Kind k;
                switch (c) {
                    case '+': k = Token::Kind::plus; break;
                    case '-': k = Token::Kind::minus; break;
                    case '*': k = Token::Kind::star; break;
                    case '/': k = Token::Kind::slash; break;
                    case '^': k = Token::Kind::caret; break;
                    case '(': k = Token::Kind::lparen; break;
                    case ')': k = Token::Kind::rparen; break;
                    case ',': k = Token::Kind::comma; break;
                    default:
                        fail(std::string("unexpected character '") + c + "'", {start, start + 1});
                }
                tokens_.push_back({k, {start, start + 1}, 0.0, {}});
                ++i;
            }
            tokens_.push_back({Token::Kind::end, {n, n}, 0.0, {}});
        }

        const Token& peek() const { return tokens_[pos_]; }
        const Token& advance() { return tokens_[pos_++]; }

        bool accept(Token::Kind k) {
            if (peek().kind == k) {
                ++pos_;
                return true;
            }
            return false;
        }

        void expect(Token::Kind k, const char* what) {
            if (!accept(k)) fail(std::string("expected ") + what, peek().span);
        }

        void check_depth(int depth) {
            if (depth > max_depth) fail("expression too deeply nested", peek().span);
        }

        NodeRef parse_expr(int depth) {
            check_depth(depth);
            NodeRef lhs = parse_term(depth + 1);
            for (;;) {
                if (accept(Token::Kind::plus))
                    lhs = make_binary(BinaryOp::add, lhs, parse_term(depth + 1));
                else if (accept(Token::Kind::minus))
                    lhs = make_binary(BinaryOp::sub, lhs, parse_term(depth + 1));
                else
                    return lhs;
            }
        }

        NodeRef parse_term(int depth) {
            check_depth(depth);
            NodeRef lhs = parse_unary(depth + 1);
            for (;;) {
                if (accept(Token::Kind::star))
                    lhs = make_binary(BinaryOp::mul, lhs, parse_unary(depth + 1));
                else if (accept(Token::Kind::slash))
                    lhs = make_binary(BinaryOp::div, lhs, parse_unary(depth + 1));
                else
                    return lhs;
            }
        }

        NodeRef parse_unary(int depth) {
            check_depth(depth);
            if (accept(Token::Kind::minus)) {
                auto n = std::make_shared<Node>();
                n->kind = Node::Kind::negate;
                n->children.push_back(parse_unary(depth + 1));
                return n;
            }
            return parse_power(depth + 1);
        }

        NodeRef parse_power(int depth) {
            check_depth(depth);
            NodeRef base = parse_primary(depth + 1);
            if (accept(Token::Kind::caret))
                return make_binary(BinaryOp::pow, base, parse_unary(depth + 1));
            return base;
        }

        NodeRef parse_primary(int depth) {
            check_depth(depth);
            const Token& t = peek();
            switch (t.kind) {
                case Token::Kind::number: {
                    advance();
                    auto n = std::make_shared<Node>();
                    n->kind = Node::Kind::number;
                    n->value = t.num;
                    return n;
                }
                case Token::Kind::ident:
                    advance();
                    return parse_ident(t, depth);
                case Token::Kind::lparen: {
                    advance();
                    NodeRef e = parse_expr(depth + 1);
                    expect(Token::Kind::rparen, "')'");
                    return e;
                }
                default:
                    fail("expected a number, variable, function call, or '('", t.span);
            }
        }

        NodeRef parse_ident(const Token& t, int depth) {
            std::string_view name = t.text;
            if (name.size() >= 2 && name[0] == 'x' && name[1] >= '1' && name[1] <= '9') {
                bool digits = true;
                for (std::size_t k = 1; k < name.size(); ++k)
                    digits = digits && std::isdigit(static_cast<unsigned char>(name[k]));
                if (digits) {
                    if (name.size() > 8) fail("variable index too large", t.span);
                    int idx = 0;
                    for (std::size_t k = 1; k < name.size(); ++k) idx = idx * 10 + (name[k] - '0');
                    auto n = std::make_shared<Node>();
                    n->kind = Node::Kind::variable;
                    n->var_index = idx;
                    return n;
                }
            }
            FuncOp func;
            std::size_t arity;
            if (name == "exp") {
                func = FuncOp::exp;
                arity = 1;
            } else if (name == "abs") {
                func = FuncOp::abs;
                arity = 1;
            } else if (name == "sqrt") {
                func = FuncOp::sqrt;
                arity = 1;
            } else if (name == "max") {
                func = FuncOp::max;
                arity = 2;
            } else if (name == "min") {
                func = FuncOp::min;
                arity = 2;
            } else if (name[0] == 'x') {
                fail("malformed variable (variables are x1, x2, ...)", t.span);
            } else {
                fail("unknown function name '" + std::string(name) + "'", t.span);
            }
            expect(Token::Kind::lparen, "'(' after function name");
            std::vector<NodeRef> args;
            args.push_back(parse_expr(depth + 1));
            while (accept(Token::Kind::comma)) args.push_back(parse_expr(depth + 1));
            SourceSpan close = peek().span;
            expect(Token::Kind::rparen, "')'");
            if (args.size() != arity)
                fail("function '" + std::string(name) + "' takes " + std::to_string(arity) +
                         (arity == 1 ? " argument" : " arguments"),
                     {t.span.start, close.end});
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::call;
            n->func = func;
            n->children = std::move(args);
            return n;
        }

        static NodeRef make_binary(BinaryOp op, NodeRef lhs, NodeRef rhs) {
            auto n = std::make_shared<Node>();
            n->kind = Node::Kind::binary;
            n->op = op;
            n->children = {std::move(lhs), std::move(rhs)};
            return n;
        }
    };

    // ---- evaluation ----

    static double checked(double v, const char* what) {
        if (!std::isfinite(v)) throw EvalError(std::string("evaluation overflowed in ") + what);
        return v;
    }

    static double eval_node(const Node& n, const Vector& point) {
        switch (n.kind) {
            case Node::Kind::number:
                return n.value;
            case Node::Kind::variable:
                if (n.var_index > point.dim())
                    throw EvalError("unbound variable x" + std::to_string(n.var_index) +
                                    " (point has dimension " + std::to_string(point.dim()) + ")");
                return point[n.var_index - 1];
            case Node::Kind::negate:
                return -eval_node(*n.children[0], point);
            case Node::Kind::binary: {
                double a = eval_node(*n.children[0], point);
                double b = eval_node(*n.children[1], point);
                switch (n.op) {
                    case BinaryOp::add: return checked(a + b, "addition");
                    case BinaryOp::sub: return checked(a - b, "subtraction");
                    case BinaryOp::mul: return checked(a * b, "multiplication");
                    case BinaryOp::div:
                        if (b == 0.0) throw EvalError("division by zero");
                        return checked(a / b, "division");
                    case BinaryOp::pow: {
                        if (a < 0.0 && b != std::floor(b))
                            throw EvalError("negative base raised to a non-integer power");
                        if (a == 0.0 && b < 0.0) throw EvalError("zero raised to a negative power");
                        return checked(std::pow(a, b), "power");
                    }
                }
                break;
            }
            case Node::Kind::call: {
                double a = eval_node(*n.children[0], point);
                switch (n.func) {
                    case FuncOp::exp: return checked(std::exp(a), "exp");
                    case FuncOp::abs: return std::abs(a);
                    case FuncOp::sqrt:
                        if (a < 0.0) throw EvalError("sqrt of a negative value");
                        return std::sqrt(a);
                    case FuncOp::max: return std::max(a, eval_node(*n.children[1], point));
                    case FuncOp::min: return std::min(a, eval_node(*n.children[1], point));
                }
                break;
            }
        }
        throw EvalError("malformed expression tree");
    }

    static int max_var(const Node& n) {
        int m = n.kind == Node::Kind::variable ? n.var_index : 0;
        for (const auto& c : n.children) m = std::max(m, max_var(*c));
        return m;
    }

    // ---- printing ----

    static void print_node(const Node& n, std::string& out) {
        switch (n.kind) {
            case Node::Kind::number: {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g", n.value);
                out += buf;
                return;
            }
            case Node::Kind::variable:
                out += "x" + std::to_string(n.var_index);
                return;
            case Node::Kind::negate:
                out += "(-";
                print_node(*n.children[0], out);
                out += ")";
                return;
            case Node::Kind::binary: {
                const char* op = nullptr;
                switch (n.op) {
                    case BinaryOp::add: op = " + "; break;
                    case BinaryOp::sub: op = " - "; break;
                    case BinaryOp::mul: op = " * "; break;
                    case BinaryOp::div: op = " / "; break;
                    case BinaryOp::pow: op = " ^ "; break;
                }
                out += "(";
                print_node(*n.children[0], out);
                out += op;
                print_node(*n.children[1], out);
                out += ")";
                return;
            }
            case Node::Kind::call: {
                const char* name = nullptr;
                switch (n.func) {
                    case FuncOp::exp: name = "exp"; break;
                    case FuncOp::abs: name = "abs"; break;
                    case FuncOp::sqrt: name = "sqrt"; break;
                    case FuncOp::max: name = "max"; break;
                    case FuncOp::min: name = "min"; break;
                }
                out += name;
                out += "(";
                for (std::size_t i = 0; i < n.children.size(); ++i) {
                    if (i) out += ", ";
                    print_node(*n.children[i], out);
                }
                out += ")";
                return;
            }
        }
    }

    static bool node_equal(const Node& a, const Node& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Node::Kind::number:
                if (a.value != b.value) return false;
                break;
            case Node::Kind::variable:
                if (a.var_index != b.var_index) return false;
                break;
            case Node::Kind::binary:
                if (a.op != b.op) return false;
                break;
            case Node::Kind::call:
                if (a.func != b.func) return false;
                break;
            case Node::Kind::negate:
                break;
        }
        if (a.children.size() != b.children.size()) return false;
        for (std::size_t i = 0; i < a.children.size(); ++i)
            if (!node_equal(*a.children[i], *b.children[i])) return false;
        return true;
    }
};

}  // namespace hhbounds
