#include "acmt/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace acmt {

double ExprNode::eval(const std::vector<double>& point) const {
    switch (kind) {
        case Kind::Constant: return value;
        case Kind::Variable:
            if (var_index < 0 || var_index >= static_cast<int>(point.size()))
                throw ContractViolation("chart variable index out of range for this point");
            return point[static_cast<std::size_t>(var_index)];
        case Kind::Unary: return -lhs->eval(point);
        case Kind::Binary: {
            double a = lhs->eval(point);
            double b = rhs->eval(point);
            switch (op) {
                case '+': return a + b;
                case '-': return a - b;
                case '*': return a * b;
                case '/': return a / b;
                case '^': return std::pow(a, b);
            }
            throw Error("corrupt expression node");
        }
        case Kind::Call: {
            double a = lhs->eval(point);
            switch (fn) {
                case Fn::Exp: return std::exp(a);
                case Fn::Ln: return std::log(a);
                case Fn::Sqrt: return std::sqrt(a);
                case Fn::Sin: return std::sin(a);
                case Fn::Cos: return std::cos(a);
            }
            throw Error("corrupt expression node");
        }
    }
    throw Error("corrupt expression node");
}

double eval_expr(const Expr& e, const std::vector<double>& point) { return e->eval(point); }

Expr make_constant(double v) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Constant;
    n->value = v;
    return n;
}

namespace {

Expr make_binary(char op, Expr a, Expr b) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Binary;
    n->op = op;
    n->lhs = std::move(a);
    n->rhs = std::move(b);
    return n;
}

Expr make_unary(Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Unary;
    n->op = '-';
    n->lhs = std::move(a);
    return n;
}

Expr make_call(ExprNode::Fn fn, Expr a) {
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::Call;
    n->fn = fn;
    n->lhs = std::move(a);
    return n;
}

class Parser {
public:
    Parser(const std::string& text, const std::map<std::string, double>& params)
        : s_(text), params_(params) {}

    Expr run() {
        Expr e = expression();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", pos_);
        return e;
    }

private:
    const std::string& s_;
    const std::map<std::string, double>& params_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }

    bool consume(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    // expression := term (('+'|'-') term)*
    Expr expression() {
        Expr e = term();
        while (true) {
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                e = make_binary(c, e, term());
            } else {
                return e;
            }
        }
    }

    // term := unary (('*'|'/') unary)*
    Expr term() {
        Expr e = unary();
        while (true) {
            char c = peek();
            if (c == '*' || c == '/') {
                ++pos_;
                e = make_binary(c, e, unary());
            } else {
                return e;
            }
        }
    }

    // unary := '-' unary | power
    Expr unary() {
        if (consume('-')) return make_unary(unary());
        return power();
    }

    // power := atom ('^' exponent)*   left-associative
    // exponent := '-' exponent | atom
    Expr power() {
        Expr e = atom();
        while (peek() == '^') {
            ++pos_;
            e = make_binary('^', e, exponent());
        }
        return e;
    }

    Expr exponent() {
        if (consume('-')) return make_unary(exponent());
        return atom();
    }

    Expr atom() {
        char c = peek();
        if (c == '(') {
            std::size_t open = pos_;
            ++pos_;
            Expr e = expression();
            if (!consume(')')) throw ParseError("missing ')' for '(' ", open);
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        throw ParseError(std::string("unexpected character '") + (c ? std::string(1, c) : "<end>") + "'",
                         pos_);
    }

    Expr number() {
        skip_ws();
        std::size_t start = pos_;
        const char* begin = s_.c_str() + pos_;
        char* end = nullptr;
        double v = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", start);
        pos_ += static_cast<std::size_t>(end - begin);
        return make_constant(v);
    }

    Expr identifier() {
        skip_ws();
        std::size_t start = pos_;
        std::string name;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            name += s_[pos_++];
        }
        static const std::map<std::string, ExprNode::Fn> fns = {
            {"exp", ExprNode::Fn::Exp},
            {"ln", ExprNode::Fn::Ln},
            {"sqrt", ExprNode::Fn::Sqrt},
            {"sin", ExprNode::Fn::Sin},
            {"cos", ExprNode::Fn::Cos},
        };
        auto fit = fns.find(name);
        if (fit != fns.end()) {
            if (!consume('(')) throw ParseError("function '" + name + "' needs '('", pos_);
            if (peek() == ')') throw ParseError("function '" + name + "' needs one argument", pos_);
            Expr arg = expression();
            if (!consume(')')) throw ParseError("missing ')' after argument of '" + name + "'", pos_);
            return make_call(fit->second, arg);
        }
        // chart variable x1..x9
        if (name.size() >= 2 && name[0] == 'x') {
            bool digits = true;
            for (std::size_t i = 1; i < name.size(); ++i)
                if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
            if (digits) {
                int idx = std::atoi(name.c_str() + 1);
                if (idx >= 1) {
                    auto n = std::make_shared<ExprNode>();
                    n->kind = ExprNode::Kind::Variable;
                    n->var_index = idx - 1;
                    return n;
                }
            }
        }
        auto pit = params_.find(name);
        if (pit != params_.end()) return make_constant(pit->second);
        throw ParseError("unknown identifier '" + name + "'", start);
    }
};

} // namespace

Expr parse_expression(const std::string& text, const std::map<std::string, double>& params) {
    return Parser(text, params).run();
}

Expr scale_by_exp_minus(const Expr& e, const Expr& a) {
    return make_binary('*', e, make_call(ExprNode::Fn::Exp, make_unary(a)));
}

} // namespace acmt
