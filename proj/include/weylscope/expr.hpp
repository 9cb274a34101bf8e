#pragma once

// Expression AST for the .metric DSL: arithmetic, power with constant
// exponent, and the primitive functions exp/log/sqrt/sin/cos/tan/sinh/cosh.
// Identifiers resolve against chart coordinates, user constants, the built-in
// constants pi and e, and named scalar fields.

#include "weylscope/errors.hpp"
#include "weylscope/jet.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

namespace weylscope {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Number, Ident, Neg, Add, Sub, Mul, Div, Pow, Call };

    Kind kind = Kind::Number;
    double number = 0.0;
    std::string name; // identifier or function name
    ExprPtr a, b;
    int line = 0, col = 0;

    static ExprPtr make_number(double v, int line = 0, int col = 0) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Number;
        e->number = v;
        e->line = line;
        e->col = col;
        return e;
    }
    static ExprPtr make_ident(std::string n, int line = 0, int col = 0) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Ident;
        e->name = std::move(n);
        e->line = line;
        e->col = col;
        return e;
    }
    static ExprPtr make_unary(Kind k, ExprPtr x) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(x);
        if (e->a) { e->line = e->a->line; e->col = e->a->col; }
        return e;
    }
    static ExprPtr make_binary(Kind k, ExprPtr x, ExprPtr y) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->a = std::move(x);
        e->b = std::move(y);
        if (e->a) { e->line = e->a->line; e->col = e->a->col; }
        return e;
    }
    static ExprPtr make_call(std::string fn, ExprPtr x, int line = 0, int col = 0) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Call;
        e->name = std::move(fn);
        e->a = std::move(x);
        e->line = line;
        e->col = col;
        return e;
    }
};

inline bool is_known_function(const std::string& n) {
    static const char* fns[] = {"exp", "log", "sqrt", "sin", "cos", "tan", "sinh", "cosh"};
    for (auto* f : fns)
        if (n == f) return true;
    return false;
}

// ----------------------------------------------------------------------
// tokenizer + recursive-descent parser
// ----------------------------------------------------------------------

namespace expr_detail {

struct Token {
    enum class Type { Number, Ident, Op, End };
    Type type = Type::End;
    double number = 0.0;
    std::string text;
    int line = 1, col = 1;
};

class Lexer {
public:
    Lexer(const std::string& src, int line0 = 1, int col0 = 1)
        : src_(src), line_(line0), col_(col0) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.col = col_;
        if (pos_ >= src_.size()) {
            t.type = Token::Type::End;
            return t;
        }
        char c = src_[pos_];
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
                advance();
            if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
                size_t save = pos_;
                advance();
                if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
                if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
                    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                        advance();
                } else {
                    pos_ = save; // 'e' belongs to the next token
                }
            }
            t.type = Token::Type::Number;
            try {
                t.number = std::stod(src_.substr(start, pos_ - start));
            } catch (...) {
                raise(ErrorKind::ParseError, "bad numeric literal at line " +
                                                 std::to_string(t.line) + ", col " +
                                                 std::to_string(t.col));
            }
            return t;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                advance();
            t.type = Token::Type::Ident;
            t.text = src_.substr(start, pos_ - start);
            return t;
        }
        static const std::string ops = "+-*/^(),[]";
        if (ops.find(c) != std::string::npos) {
            t.type = Token::Type::Op;
            t.text = std::string(1, c);
            advance();
            return t;
        }
        raise(ErrorKind::ParseError, std::string("unexpected character '") + c +
                                         "' at line " + std::to_string(line_) + ", col " +
                                         std::to_string(col_));
    }

private:
    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_])))
            advance();
    }

    const std::string& src_;
    size_t pos_ = 0;
    int line_, col_;
};

class Parser {
public:
    Parser(const std::string& src, int line0 = 1, int col0 = 1) : lex_(src, line0, col0) {
        cur_ = lex_.next();
    }

    ExprPtr parse_full() {
        ExprPtr e = parse_expr();
        expect_end();
        return e;
    }

    ExprPtr parse_expr() {
        ExprPtr e = parse_term();
        while (is_op("+") || is_op("-")) {
            bool plus = is_op("+");
            bump();
            ExprPtr rhs = parse_term();
            e = Expr::make_binary(plus ? Expr::Kind::Add : Expr::Kind::Sub, e, rhs);
        }
        return e;
    }

    bool at_end() const { return cur_.type == Token::Type::End; }
    const Token& current() const { return cur_; }

private:
    ExprPtr parse_term() {
        ExprPtr e = parse_unary();
        while (is_op("*") || is_op("/")) {
            bool mul = is_op("*");
            bump();
            ExprPtr rhs = parse_unary();
            e = Expr::make_binary(mul ? Expr::Kind::Mul : Expr::Kind::Div, e, rhs);
        }
        return e;
    }

    ExprPtr parse_unary() {
        if (is_op("-")) {
            bump();
            return Expr::make_unary(Expr::Kind::Neg, parse_unary());
        }
        if (is_op("+")) {
            bump();
            return parse_unary();
        }
        return parse_power();
    }

    ExprPtr parse_power() {
        ExprPtr base = parse_atom();
        if (is_op("^")) {
            bump();
            ExprPtr expo = parse_unary(); // right associative, unary exponents allowed
            return Expr::make_binary(Expr::Kind::Pow, base, expo);
        }
        return base;
    }

    ExprPtr parse_atom() {
        if (cur_.type == Token::Type::Number) {
            ExprPtr e = Expr::make_number(cur_.number, cur_.line, cur_.col);
            bump();
            return e;
        }
        if (cur_.type == Token::Type::Ident) {
            std::string name = cur_.text;
            int line = cur_.line, col = cur_.col;
            bump();
            if (is_op("(")) {
                if (!is_known_function(name))
                    raise(ErrorKind::ParseError, "unknown function '" + name + "' at line " +
                                                     std::to_string(line) + ", col " +
                                                     std::to_string(col));
                bump();
                ExprPtr arg = parse_expr();
                expect_op(")");
                return Expr::make_call(name, arg, line, col);
            }
            return Expr::make_ident(name, line, col);
        }
        if (is_op("(")) {
            bump();
            ExprPtr e = parse_expr();
            expect_op(")");
            return e;
        }
        raise(ErrorKind::ParseError, "expected expression at line " + std::to_string(cur_.line) +
                                         ", col " + std::to_string(cur_.col));
    }

    bool is_op(const char* s) const {
        return cur_.type == Token::Type::Op && cur_.text == s;
    }
    void bump() { cur_ = lex_.next(); }
    void expect_op(const char* s) {
        if (!is_op(s))
            raise(ErrorKind::ParseError, std::string("expected '") + s + "' at line " +
                                             std::to_string(cur_.line) + ", col " +
                                             std::to_string(cur_.col));
        bump();
    }
    void expect_end() {
        if (cur_.type != Token::Type::End)
            raise(ErrorKind::ParseError, "trailing input at line " + std::to_string(cur_.line) +
                                             ", col " + std::to_string(cur_.col));
    }

    Lexer lex_;
    Token cur_;
};

} // namespace expr_detail

inline ExprPtr parse_expression(const std::string& text, int line0 = 1, int col0 = 1) {
    expr_detail::Parser p(text, line0, col0);
    return p.parse_full();
}

// ----------------------------------------------------------------------
// evaluation
// ----------------------------------------------------------------------

struct EvalEnv {
    int dim = 0;
    const std::map<std::string, int>* coord_index = nullptr;
    const double* point = nullptr;
    const std::map<std::string, double>* constants = nullptr; // includes user consts
    const std::map<std::string, ExprPtr>* scalars = nullptr;  // optional named fields
    int order = 3;
};

inline bool lookup_builtin_constant(const std::string& name, double& out) {
    if (name == "pi") { out = std::numbers::pi; return true; }
    if (name == "e") { out = std::numbers::e; return true; }
    return false;
}

// evaluate a subtree that must not depend on coordinates or scalars
inline double eval_constant(const ExprPtr& e, const std::map<std::string, double>* constants) {
    switch (e->kind) {
        case Expr::Kind::Number: return e->number;
        case Expr::Kind::Ident: {
            double v;
            if (lookup_builtin_constant(e->name, v)) return v;
            if (constants) {
                auto it = constants->find(e->name);
                if (it != constants->end()) return it->second;
            }
            raise(ErrorKind::ParseError, "power exponent must be constant; '" + e->name +
                                             "' is not a constant (line " +
                                             std::to_string(e->line) + ")");
        }
        case Expr::Kind::Neg: return -eval_constant(e->a, constants);
        case Expr::Kind::Add: return eval_constant(e->a, constants) + eval_constant(e->b, constants);
        case Expr::Kind::Sub: return eval_constant(e->a, constants) - eval_constant(e->b, constants);
        case Expr::Kind::Mul: return eval_constant(e->a, constants) * eval_constant(e->b, constants);
        case Expr::Kind::Div: return eval_constant(e->a, constants) / eval_constant(e->b, constants);
        case Expr::Kind::Pow:
            return std::pow(eval_constant(e->a, constants), eval_constant(e->b, constants));
        case Expr::Kind::Call: {
            double x = eval_constant(e->a, constants);
            if (e->name == "exp") return std::exp(x);
            if (e->name == "log") return std::log(x);
            if (e->name == "sqrt") return std::sqrt(x);
            if (e->name == "sin") return std::sin(x);
            if (e->name == "cos") return std::cos(x);
            if (e->name == "tan") return std::tan(x);
            if (e->name == "sinh") return std::sinh(x);
            if (e->name == "cosh") return std::cosh(x);
            raise(ErrorKind::ParseError, "unknown function '" + e->name + "'");
        }
    }
    raise(ErrorKind::ParseError, "bad expression node");
}

inline Jet3 jet_eval(const ExprPtr& e, const EvalEnv& env) {
    switch (e->kind) {
        case Expr::Kind::Number:
            return Jet3::constant(env.dim, e->number, env.order);
        case Expr::Kind::Ident: {
            if (env.coord_index) {
                auto it = env.coord_index->find(e->name);
                if (it != env.coord_index->end())
                    return Jet3::coordinate(env.dim, it->second, env.point[it->second], env.order);
            }
            double v;
            if (lookup_builtin_constant(e->name, v)) return Jet3::constant(env.dim, v, env.order);
            if (env.constants) {
                auto it = env.constants->find(e->name);
                if (it != env.constants->end())
                    return Jet3::constant(env.dim, it->second, env.order);
            }
            if (env.scalars) {
                auto it = env.scalars->find(e->name);
                if (it != env.scalars->end()) return jet_eval(it->second, env);
            }
            raise(ErrorKind::UnknownSymbol, "undeclared identifier '" + e->name + "' (line " +
                                                std::to_string(e->line) + ", col " +
                                                std::to_string(e->col) + ")");
        }
        case Expr::Kind::Neg: return -jet_eval(e->a, env);
        case Expr::Kind::Add: return jet_eval(e->a, env) + jet_eval(e->b, env);
        case Expr::Kind::Sub: return jet_eval(e->a, env) - jet_eval(e->b, env);
        case Expr::Kind::Mul: return jet_eval(e->a, env) * jet_eval(e->b, env);
        case Expr::Kind::Div: return jet_eval(e->a, env) / jet_eval(e->b, env);
        case Expr::Kind::Pow: {
            double c = eval_constant(e->b, env.constants);
            return pow(jet_eval(e->a, env), c);
        }
        case Expr::Kind::Call: {
            Jet3 x = jet_eval(e->a, env);
            if (e->name == "exp") return exp(x);
            if (e->name == "log") return log(x);
            if (e->name == "sqrt") return sqrt(x);
            if (e->name == "sin") return sin(x);
            if (e->name == "cos") return cos(x);
            if (e->name == "tan") return tan(x);
            if (e->name == "sinh") return sinh(x);
            if (e->name == "cosh") return cosh(x);
            raise(ErrorKind::UnknownSymbol, "unknown function '" + e->name + "'");
        }
    }
    raise(ErrorKind::ParseError, "bad expression node");
}

// plain value evaluation (shares only the AST with jet_eval)
inline double eval_value(const ExprPtr& e, const EvalEnv& env) {
    switch (e->kind) {
        case Expr::Kind::Number: return e->number;
        case Expr::Kind::Ident: {
            if (env.coord_index) {
                auto it = env.coord_index->find(e->name);
                if (it != env.coord_index->end()) return env.point[it->second];
            }
            double v;
            if (lookup_builtin_constant(e->name, v)) return v;
            if (env.constants) {
                auto it = env.constants->find(e->name);
                if (it != env.constants->end()) return it->second;
            }
            if (env.scalars) {
                auto it = env.scalars->find(e->name);
                if (it != env.scalars->end()) return eval_value(it->second, env);
            }
            raise(ErrorKind::UnknownSymbol, "undeclared identifier '" + e->name + "'");
        }
        case Expr::Kind::Neg: return -eval_value(e->a, env);
        case Expr::Kind::Add: return eval_value(e->a, env) + eval_value(e->b, env);
        case Expr::Kind::Sub: return eval_value(e->a, env) - eval_value(e->b, env);
        case Expr::Kind::Mul: return eval_value(e->a, env) * eval_value(e->b, env);
        case Expr::Kind::Div: {
            double d = eval_value(e->b, env);
            if (std::abs(d) < 1e-300)
                raise(ErrorKind::DivisionNearZero, "divisor magnitude below 1e-300");
            return eval_value(e->a, env) / d;
        }
        case Expr::Kind::Pow:
            return std::pow(eval_value(e->a, env), eval_constant(e->b, env.constants));
        case Expr::Kind::Call: {
            double x = eval_value(e->a, env);
            if (e->name == "exp") return std::exp(x);
            if (e->name == "log") {
                if (!(x > 0.0)) raise(ErrorKind::DomainError, "log of non-positive value");
                return std::log(x);
            }
            if (e->name == "sqrt") {
                if (!(x > 0.0)) raise(ErrorKind::DomainError, "sqrt of non-positive value");
                return std::sqrt(x);
            }
            if (e->name == "sin") return std::sin(x);
            if (e->name == "cos") return std::cos(x);
            if (e->name == "tan") return std::tan(x);
            if (e->name == "sinh") return std::sinh(x);
            if (e->name == "cosh") return std::cosh(x);
            raise(ErrorKind::UnknownSymbol, "unknown function '" + e->name + "'");
        }
    }
    raise(ErrorKind::ParseError, "bad expression node");
}

// free identifiers that are not builtins
inline void collect_identifiers(const ExprPtr& e, std::vector<std::string>& out) {
    if (!e) return;
    if (e->kind == Expr::Kind::Ident) {
        double tmp;
        if (!lookup_builtin_constant(e->name, tmp)) out.push_back(e->name);
    }
    collect_identifiers(e->a, out);
    collect_identifiers(e->b, out);
}

// ----------------------------------------------------------------------
// rendering / canonical form
// ----------------------------------------------------------------------

namespace expr_detail {

inline int precedence(Expr::Kind k) {
    switch (k) {
        case Expr::Kind::Add:
        case Expr::Kind::Sub: return 1;
        case Expr::Kind::Mul:
        case Expr::Kind::Div: return 2;
        case Expr::Kind::Neg: return 3;
        case Expr::Kind::Pow: return 4;
        default: return 5;
    }
}

inline std::string format_number(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace expr_detail

inline std::string render(const ExprPtr& e) {
    using expr_detail::precedence;
    auto wrap = [&](const ExprPtr& child, int parent_prec, bool strict) {
        std::string s = render(child);
        int cp = precedence(child->kind);
        if (cp < parent_prec || (strict && cp == parent_prec)) return "(" + s + ")";
        return s;
    };
    switch (e->kind) {
        case Expr::Kind::Number: return expr_detail::format_number(e->number);
        case Expr::Kind::Ident: return e->name;
        case Expr::Kind::Neg: return "-" + wrap(e->a, 3, false);
        case Expr::Kind::Add: return wrap(e->a, 1, false) + " + " + wrap(e->b, 1, false);
        case Expr::Kind::Sub: return wrap(e->a, 1, false) + " - " + wrap(e->b, 1, true);
        case Expr::Kind::Mul: return wrap(e->a, 2, false) + "*" + wrap(e->b, 2, false);
        case Expr::Kind::Div: return wrap(e->a, 2, false) + "/" + wrap(e->b, 2, true);
        case Expr::Kind::Pow: return wrap(e->a, 5, true) + "^" + wrap(e->b, 5, true);
        case Expr::Kind::Call: return e->name + "(" + render(e->a) + ")";
    }
    return "?";
}

inline bool structural_equal(const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return x == y;
    if (x->kind != y->kind) return false;
    switch (x->kind) {
        case Expr::Kind::Number: return x->number == y->number;
        case Expr::Kind::Ident: return x->name == y->name;
        case Expr::Kind::Call:
            return x->name == y->name && structural_equal(x->a, y->a);
        case Expr::Kind::Neg: return structural_equal(x->a, y->a);
        default:
            return structural_equal(x->a, y->a) && structural_equal(x->b, y->b);
    }
}

// Canonical form: children canonicalized, commutative chains flattened and
// sorted by rendered text. Used for the symmetry check of metric entries.
inline ExprPtr canonical(const ExprPtr& e) {
    if (!e) return e;
    switch (e->kind) {
        case Expr::Kind::Number:
        case Expr::Kind::Ident: return e;
        case Expr::Kind::Neg: return Expr::make_unary(Expr::Kind::Neg, canonical(e->a));
        case Expr::Kind::Call: return Expr::make_call(e->name, canonical(e->a), e->line, e->col);
        case Expr::Kind::Sub:
            return Expr::make_binary(Expr::Kind::Sub, canonical(e->a), canonical(e->b));
        case Expr::Kind::Div:
            return Expr::make_binary(Expr::Kind::Div, canonical(e->a), canonical(e->b));
        case Expr::Kind::Pow:
            return Expr::make_binary(Expr::Kind::Pow, canonical(e->a), canonical(e->b));
        case Expr::Kind::Add:
        case Expr::Kind::Mul: {
            const Expr::Kind k = e->kind;
            std::vector<ExprPtr> chain;
            // flatten nested chains of the same operator
            std::vector<ExprPtr> stack{e};
            while (!stack.empty()) {
                ExprPtr cur = stack.back();
                stack.pop_back();
                if (cur->kind == k) {
                    stack.push_back(cur->a);
                    stack.push_back(cur->b);
                } else {
                    chain.push_back(canonical(cur));
                }
            }
            std::sort(chain.begin(), chain.end(), [](const ExprPtr& x, const ExprPtr& y) {
                return render(x) < render(y);
            });
            ExprPtr acc = chain.front();
            for (size_t i = 1; i < chain.size(); ++i)
                acc = Expr::make_binary(k, acc, chain[i]);
            return acc;
        }
    }
    return e;
}

inline bool canonical_equal(const ExprPtr& x, const ExprPtr& y) {
    return structural_equal(canonical(x), canonical(y));
}

} // namespace weylscope
