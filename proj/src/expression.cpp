#include "weingarten/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>

#include "weingarten/errors.hpp"

namespace weingarten {

enum class Op { Const, Var, Add, Sub, Mul, Div, Pow, Neg, Cot, Coth, Tan, Tanh, Exp, Sqrt };

struct Expression::Node {
    Op op;
    double value = 0.0;   // Const
    size_t index = 0;     // Var
    std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;

struct Parser {
    const std::string& text;
    const std::vector<std::string>& vars;
    size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw SchemaError("expression: " + what + " at position " + std::to_string(pos) +
                          " in \"" + text + "\"");
    }

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
        auto n = std::make_shared<Expression::Node>();
        n->op = op;
        n->a = std::move(a);
        n->b = std::move(b);
        return n;
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (;;) {
            if (eat('+'))
                lhs = make(Op::Add, lhs, term());
            else if (eat('-'))
                lhs = make(Op::Sub, lhs, term());
            else
                return lhs;
        }
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (;;) {
            if (eat('*'))
                lhs = make(Op::Mul, lhs, unary());
            else if (eat('/'))
                lhs = make(Op::Div, lhs, unary());
            else
                return lhs;
        }
    }

    NodePtr unary() {
        if (eat('-')) return make(Op::Neg, unary());
        return power();
    }

    NodePtr power() {
        NodePtr base = atom();
        if (eat('^')) return make(Op::Pow, base, unary());
        return base;
    }

    NodePtr atom() {
        skip_ws();
        if (pos >= text.size()) fail("unexpected end of input");
        const char c = text[pos];
        if (c == '(') {
            ++pos;
            NodePtr inner = expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            char* end = nullptr;
            const double v = std::strtod(text.c_str() + pos, &end);
            if (end == text.c_str() + pos) fail("bad number");
            pos = static_cast<size_t>(end - text.c_str());
            auto n = std::make_shared<Expression::Node>();
            n->op = Op::Const;
            n->value = v;
            return n;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
                ++pos;
            const std::string name = text.substr(start, pos - start);
            static const std::map<std::string, Op> fns = {
                {"cot", Op::Cot}, {"coth", Op::Coth}, {"tan", Op::Tan},
                {"tanh", Op::Tanh}, {"exp", Op::Exp}, {"sqrt", Op::Sqrt}};
            if (auto it = fns.find(name); it != fns.end()) {
                if (!eat('(')) fail("function '" + name + "' expects '('");
                NodePtr arg = expr();
                if (!eat(')')) fail("expected ')'");
                return make(it->second, arg);
            }
            for (size_t i = 0; i < vars.size(); ++i) {
                if (vars[i] == name) {
                    auto n = std::make_shared<Expression::Node>();
                    n->op = Op::Var;
                    n->index = i;
                    return n;
                }
            }
            fail("unknown identifier '" + name + "'");
        }
        fail(std::string("unexpected character '") + c + "'");
    }
};

double eval_node(const Expression::Node& n, std::span<const double> v) {
    switch (n.op) {
        case Op::Const: return n.value;
        case Op::Var: return v[n.index];
        case Op::Add: return eval_node(*n.a, v) + eval_node(*n.b, v);
        case Op::Sub: return eval_node(*n.a, v) - eval_node(*n.b, v);
        case Op::Mul: return eval_node(*n.a, v) * eval_node(*n.b, v);
        case Op::Div: return eval_node(*n.a, v) / eval_node(*n.b, v);
        case Op::Pow: return std::pow(eval_node(*n.a, v), eval_node(*n.b, v));
        case Op::Neg: return -eval_node(*n.a, v);
        case Op::Cot: return 1.0 / std::tan(eval_node(*n.a, v));
        case Op::Coth: {
            const double x = eval_node(*n.a, v);
            return std::cosh(x) / std::sinh(x);
        }
        case Op::Tan: return std::tan(eval_node(*n.a, v));
        case Op::Tanh: return std::tanh(eval_node(*n.a, v));
        case Op::Exp: return std::exp(eval_node(*n.a, v));
        case Op::Sqrt: return std::sqrt(eval_node(*n.a, v));
    }
    return 0.0;  // unreachable
}

}  // namespace

Expression Expression::parse(const std::string& text,
                             const std::vector<std::string>& variables) {
    Parser p{text, variables};
    NodePtr root = p.expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail("trailing input");
    Expression e;
    e.root_ = std::move(root);
    e.text_ = text;
    e.n_vars_ = variables.size();
    return e;
}

double Expression::eval(std::span<const double> values) const {
    if (values.size() != n_vars_)
        throw Error("expression: wrong number of variable values");
    return eval_node(*root_, values);
}

}  // namespace weingarten
