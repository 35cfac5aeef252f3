#pragma once
// Text format for differential polynomials and local functionals, with a
// parser and a canonical renderer. The renderer emits exactly the syntax the
// parser reads, so parse(render(f)) reproduces every declaration's value.
//
// Grammar:
//   file     = { decl } ;
//   decl     = "func" ident ";" | ident "=" expr ";" ;
//   expr     = term { ("+"|"-") term } ;
//   term     = factor { "*" factor } ;
//   factor   = rational | jet | funcjet | "(" expr ")" | factor "^" nat
//            | "-" factor | "int" "(" expr ")" ;
//   jet      = ("u"|"th") [ "[" nat "," nat "]" ] ;
//   funcjet  = ident { "'" } ;
//   rational = nat [ "/" nat ] ;
//
// Scalar shorthands u1, th2, ... are accepted and, for single-component
// files, emitted; u[i,s] / th[i,s] is the general form (component i is
// 1-based). A bare ident is either a function symbol declared with
// "func name;" (then primes select its derivative jets: c, c', c'') or a
// reference to an earlier declaration. "int(...)" marks a local functional;
// functionals combine linearly and scale by rational constants, but cannot
// be multiplied together, raised to powers, or mixed with densities in sums.

#include "jetalg/diffpoly.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace jbcli {

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int line_, int col_, const std::string& message)
        : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_)
              + ": " + message)
        , line(line_)
        , col(col_)
    {
    }
};

// A declaration's value: a differential polynomial, optionally wrapped in
// int(...) to stand for the local functional with that density.
struct Value {
    jetalg::DiffPoly density { 1 };
    bool integrated = false;

    bool operator==(const Value&) const = default;
};

struct SourceFile {
    std::vector<std::string> functions;               // declared via "func name;"
    std::vector<std::pair<std::string, Value>> decls; // declaration order
    int components = 1;

    const Value* find(const std::string& name) const;
    bool has_function(const std::string& name) const;
};

// Parses a whole file. Throws ParseError with 1-based line/column on syntax
// errors, unknown symbols, and ill-typed combinations.
SourceFile parse(const std::string& text);

// Parses a single expression against an existing scope (its functions and
// declarations are visible). The result uses max(scope.components, jets seen).
Value parse_expression(const std::string& text, const SourceFile& scope);

// Canonical text forms.
std::string render_value(const Value& v);
std::string render_decl(const std::string& name, const Value& v);
std::string render(const SourceFile& f);

} // namespace jbcli
