#include "jbcli/dsl.hpp"

#include "jetalg/atom.hpp"
#include "jetalg/errors.hpp"
#include "jetalg/interner.hpp"
#include "jetalg/print.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <optional>
#include <sstream>

namespace jbcli {

using jetalg::Atom;
using jetalg::Coefficient;
using jetalg::DiffPoly;
using jetalg::Rat;

namespace {

// ---------------------------------------------------------------- lexing

enum class Tok {
    Ident,   // letters/digits/underscore, starts with a letter
    Nat,     // digit run
    Punct,   // one of + - * ^ ( ) [ ] , ; / ' =
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : s_(text) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true) {
            skip_space();
            Token t;
            t.line = line_;
            t.col = col_;
            if (i_ >= s_.size()) {
                out.push_back(t);
                return out;
            }
            char c = s_[i_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = Tok::Ident;
                while (i_ < s_.size()
                    && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_'))
                    t.text += take();
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                t.kind = Tok::Nat;
                while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
                    t.text += take();
            } else if (std::string("+-*^()[],;/'=").find(c) != std::string::npos) {
                t.kind = Tok::Punct;
                t.text = take();
            } else {
                throw ParseError(line_, col_,
                    std::string("unexpected character '") + c + "'");
            }
            out.push_back(std::move(t));
        }
    }

private:
    char take()
    {
        char c = s_[i_++];
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        return c;
    }

    void skip_space()
    {
        while (i_ < s_.size()
            && std::isspace(static_cast<unsigned char>(s_[i_])))
            take();
    }

    const std::string& s_;
    std::size_t i_ = 0;
    int line_ = 1;
    int col_ = 1;
};

// ------------------------------------------------------------------- AST

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    enum class Kind { Rational, Jet, Symbol, Add, Sub, Mul, Pow, Neg, Integral };
    Kind kind;
    int line = 1;
    int col = 1;

    Rat value;            // Rational
    bool odd = false;     // Jet
    int component = 1;    // Jet
    int order = 0;        // Jet
    std::string name;     // Symbol (func jet or declaration reference)
    int primes = 0;       // Symbol
    unsigned exponent = 0; // Pow
    ExprPtr a, b;
};

struct RawDecl {
    bool isFunc = false;
    std::string name;
    int line = 1;
    int col = 1;
    ExprPtr expr; // null for func decls
};

// "u"/"th" (order 0, may take brackets) and the scalar shorthands
// u1, u2, ..., th1, th2, ...
std::optional<std::pair<bool, int>> jet_shorthand(const std::string& s)
{
    std::size_t head = 0;
    bool odd = false;
    if (s.rfind("th", 0) == 0) {
        head = 2;
        odd = true;
    } else if (s.rfind("u", 0) == 0) {
        head = 1;
    } else {
        return std::nullopt;
    }
    if (head == s.size())
        return std::make_pair(odd, 0);
    std::string digits = s.substr(head);
    if (!std::all_of(digits.begin(), digits.end(),
            [](unsigned char c) { return std::isdigit(c); }))
        return std::nullopt;
    if (digits.size() > 3)
        return std::nullopt;
    return std::make_pair(odd, std::stoi(digits));
}

// ------------------------------------------------------------------ parser

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : t_(std::move(toks)) {}

    std::vector<RawDecl> file()
    {
        std::vector<RawDecl> out;
        while (peek().kind != Tok::End)
            out.push_back(decl());
        return out;
    }

    ExprPtr bare_expression()
    {
        ExprPtr e = expr();
        const Token& t = peek();
        if (t.kind != Tok::End)
            throw ParseError(t.line, t.col, "expected end of expression");
        return e;
    }

private:
    const Token& peek(std::size_t ahead = 0) const
    {
        std::size_t k = std::min(i_ + ahead, t_.size() - 1);
        return t_[k];
    }
    Token next() { return t_[std::min(i_++, t_.size() - 1)]; }

    bool at_punct(const char* p) const
    {
        return peek().kind == Tok::Punct && peek().text == p;
    }

    Token expect_punct(const char* p)
    {
        if (!at_punct(p))
            throw ParseError(peek().line, peek().col,
                std::string("expected '") + p + "'");
        return next();
    }

    long expect_nat(const char* what)
    {
        const Token& t = peek();
        if (t.kind != Tok::Nat)
            throw ParseError(t.line, t.col, std::string("expected ") + what);
        if (t.text.size() > 9)
            throw ParseError(t.line, t.col, "number too large");
        long v = std::stol(t.text);
        next();
        return v;
    }

    RawDecl decl()
    {
        const Token& t = peek();
        if (t.kind != Tok::Ident)
            throw ParseError(t.line, t.col, "expected a declaration");
        RawDecl d;
        d.line = t.line;
        d.col = t.col;
        if (t.text == "func") {
            next();
            const Token& n = peek();
            if (n.kind != Tok::Ident || n.text == "func" || n.text == "int")
                throw ParseError(n.line, n.col, "expected a function name");
            d.isFunc = true;
            d.name = n.text;
            next();
            expect_punct(";");
            return d;
        }
        d.name = t.text;
        next();
        expect_punct("=");
        d.expr = expr();
        expect_punct(";");
        return d;
    }

    ExprPtr expr()
    {
        ExprPtr left = term();
        while (at_punct("+") || at_punct("-")) {
            Token op = next();
            ExprPtr node = std::make_unique<Expr>();
            node->kind = op.text == "+" ? Expr::Kind::Add : Expr::Kind::Sub;
            node->line = op.line;
            node->col = op.col;
            node->a = std::move(left);
            node->b = term();
            left = std::move(node);
        }
        return left;
    }

    ExprPtr term()
    {
        ExprPtr left = factor();
        while (at_punct("*")) {
            Token op = next();
            ExprPtr node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Mul;
            node->line = op.line;
            node->col = op.col;
            node->a = std::move(left);
            node->b = factor();
            left = std::move(node);
        }
        return left;
    }

    ExprPtr factor()
    {
        ExprPtr base = primary();
        while (at_punct("^")) {
            Token op = next();
            long e = expect_nat("an exponent");
            ExprPtr node = std::make_unique<Expr>();
            node->kind = Expr::Kind::Pow;
            node->line = op.line;
            node->col = op.col;
            node->exponent = static_cast<unsigned>(e);
            node->a = std::move(base);
            base = std::move(node);
        }
        return base;
    }

    ExprPtr primary()
    {
        const Token& t = peek();
        ExprPtr node = std::make_unique<Expr>();
        node->line = t.line;
        node->col = t.col;

        if (t.kind == Tok::Punct && t.text == "-") {
            next();
            node->kind = Expr::Kind::Neg;
            node->a = factor();
            return node;
        }
        if (t.kind == Tok::Punct && t.text == "(") {
            next();
            node = expr();
            expect_punct(")");
            return node;
        }
        if (t.kind == Tok::Nat) {
            long num = expect_nat("a number");
            Rat v(num);
            if (at_punct("/")) {
                next();
                long den = expect_nat("a denominator");
                if (den == 0)
                    throw ParseError(t.line, t.col, "zero denominator");
                v = Rat(num, den);
                v.canonicalize();
            }
            node->kind = Expr::Kind::Rational;
            node->value = v;
            return node;
        }
        if (t.kind == Tok::Ident) {
            if (t.text == "int") {
                next();
                expect_punct("(");
                node->kind = Expr::Kind::Integral;
                node->a = expr();
                expect_punct(")");
                return node;
            }
            if (std::optional<std::pair<bool, int>> jet = jet_shorthand(t.text)) {
                bool bare = t.text == "u" || t.text == "th";
                next();
                node->kind = Expr::Kind::Jet;
                node->odd = jet->first;
                node->component = 1;
                node->order = jet->second;
                if (bare && at_punct("[")) {
                    // bracketed form u[i,s] / th[i,s]
                    next();
                    long comp = expect_nat("a component index");
                    expect_punct(",");
                    long order = expect_nat("a jet order");
                    expect_punct("]");
                    if (comp < 1)
                        throw ParseError(node->line, node->col,
                            "component index must be at least 1");
                    node->component = static_cast<int>(comp);
                    node->order = static_cast<int>(order);
                }
                return node;
            }
            next();
            node->kind = Expr::Kind::Symbol;
            node->name = t.text;
            while (at_punct("'")) {
                next();
                ++node->primes;
            }
            return node;
        }
        throw ParseError(t.line, t.col, "expected an expression");
    }

    std::vector<Token> t_;
    std::size_t i_ = 0;
};

// -------------------------------------------------------------- evaluation

int max_component(const Expr& e)
{
    int m = 1;
    if (e.kind == Expr::Kind::Jet)
        m = std::max(m, e.component);
    if (e.a)
        m = std::max(m, max_component(*e.a));
    if (e.b)
        m = std::max(m, max_component(*e.b));
    return m;
}

bool rational_constant(const Value& v, Rat& out)
{
    if (v.integrated)
        return false;
    if (v.density.is_zero()) {
        out = Rat(0);
        return true;
    }
    const auto& terms = v.density.terms();
    if (terms.size() != 1)
        return false;
    const auto& [m, c] = *terms.begin();
    if (!m.odd.empty() || !m.even.empty())
        return false;
    if (!c.den_is_one() || !c.num().is_constant())
        return false;
    out = c.num().constant_value();
    return true;
}

class Evaluator {
public:
    Evaluator(const SourceFile& scope, int components)
        : scope_(scope)
        , n_(components)
    {
    }

    Value eval(const Expr& e)
    {
        switch (e.kind) {
        case Expr::Kind::Rational:
            return { DiffPoly::constant(n_, e.value), false };
        case Expr::Kind::Jet: {
            if (e.component > n_)
                throw ParseError(e.line, e.col, "component index out of range");
            Atom a = e.odd ? jetalg::atom_odd(e.component, e.order)
                           : jetalg::atom_even(e.component, e.order);
            return { DiffPoly::atom(n_, a), false };
        }
        case Expr::Kind::Symbol:
            return symbol(e);
        case Expr::Kind::Add:
        case Expr::Kind::Sub: {
            Value left = eval(*e.a);
            Value right = eval(*e.b);
            if (left.integrated != right.integrated)
                throw ParseError(e.line, e.col,
                    "cannot add a functional and a density");
            DiffPoly d = e.kind == Expr::Kind::Add
                ? left.density + right.density
                : left.density - right.density;
            return { std::move(d), left.integrated };
        }
        case Expr::Kind::Mul: {
            Value left = eval(*e.a);
            Value right = eval(*e.b);
            if (!left.integrated && !right.integrated)
                return { mul(left.density, right.density), false };
            Rat c;
            if (left.integrated && rational_constant(right, c))
                return { left.density * c, true };
            if (right.integrated && rational_constant(left, c))
                return { right.density * c, true };
            throw ParseError(e.line, e.col,
                "a functional can only be multiplied by a rational constant");
        }
        case Expr::Kind::Pow: {
            Value base = eval(*e.a);
            if (base.integrated)
                throw ParseError(e.line, e.col,
                    "cannot raise a functional to a power");
            return { jetalg::dp_pow(base.density, e.exponent), false };
        }
        case Expr::Kind::Neg: {
            Value v = eval(*e.a);
            return { -v.density, v.integrated };
        }
        case Expr::Kind::Integral: {
            Value v = eval(*e.a);
            if (v.integrated)
                throw ParseError(e.line, e.col, "int(...) cannot be nested");
            return { std::move(v.density), true };
        }
        }
        throw ParseError(e.line, e.col, "malformed expression");
    }

private:
    Value symbol(const Expr& e)
    {
        if (scope_.has_function(e.name)) {
            jetalg::SymbolId id = jetalg::register_symbol(e.name);
            jetalg::Var v = jetalg::symjet1(id, e.primes);
            return { DiffPoly::scalar(n_, Coefficient::variable(v)), false };
        }
        if (e.primes > 0)
            throw ParseError(e.line, e.col,
                "'" + e.name + "' is not a declared function symbol");
        if (const Value* v = scope_.find(e.name)) {
            Value out = *v;
            if (out.density.components() != n_)
                throw ParseError(e.line, e.col,
                    "'" + e.name + "' uses a different component count");
            return out;
        }
        throw ParseError(e.line, e.col, "unknown symbol '" + e.name + "'");
    }

    const SourceFile& scope_;
    int n_;
};

bool reserved_name(const std::string& s)
{
    // keywords and jet spellings cannot be declaration or function names
    return s == "func" || s == "int" || jet_shorthand(s).has_value();
}

} // namespace

const Value* SourceFile::find(const std::string& name) const
{
    for (const auto& [n, v] : decls)
        if (n == name)
            return &v;
    return nullptr;
}

bool SourceFile::has_function(const std::string& name) const
{
    return std::find(functions.begin(), functions.end(), name) != functions.end();
}

SourceFile parse(const std::string& text)
{
    std::vector<Token> toks = Lexer(text).run();
    Parser parser(std::move(toks));
    std::vector<RawDecl> raw = parser.file();

    SourceFile out;
    int n = 1;
    for (const RawDecl& d : raw)
        if (d.expr)
            n = std::max(n, max_component(*d.expr));
    out.components = n;

    for (const RawDecl& d : raw) {
        if (reserved_name(d.name))
            throw ParseError(d.line, d.col,
                "'" + d.name + "' is a reserved spelling");
        if (out.find(d.name) || out.has_function(d.name))
            throw ParseError(d.line, d.col, "duplicate name '" + d.name + "'");
        if (d.isFunc) {
            jetalg::register_symbol(d.name);
            out.functions.push_back(d.name);
            continue;
        }
        Evaluator ev(out, n);
        out.decls.emplace_back(d.name, ev.eval(*d.expr));
    }
    return out;
}

Value parse_expression(const std::string& text, const SourceFile& scope)
{
    std::vector<Token> toks = Lexer(text).run();
    Parser parser(std::move(toks));
    ExprPtr e = parser.bare_expression();
    int n = std::max(scope.components, max_component(*e));
    Evaluator ev(scope, n);
    return ev.eval(*e);
}

std::string render_value(const Value& v)
{
    std::string body = jetalg::to_text(v.density);
    return v.integrated ? "int(" + body + ")" : body;
}

std::string render_decl(const std::string& name, const Value& v)
{
    return name + " = " + render_value(v) + ";";
}

std::string render(const SourceFile& f)
{
    std::ostringstream os;
    for (const std::string& fn : f.functions)
        os << "func " << fn << ";\n";
    for (const auto& [name, value] : f.decls)
        os << render_decl(name, value) << "\n";
    return os.str();
}

} // namespace jbcli
