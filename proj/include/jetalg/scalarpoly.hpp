#pragma once
// Sparse multivariate polynomials over Q in the "scalar" variables that make
// up coefficients of differential polynomials: the order-0 field variables
// u^i and derivative jets of registered function symbols (c, c', c'', ...).
//
// Variables are packed into a single 64-bit key whose numeric order is the
// structural order (u-vars first by component, then symbol jets by symbol id
// and derivative multi-index), so canonical forms never depend on
// registration timing.

#include "jetalg/interner.hpp"
#include "jetalg/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace jetalg {

using Var = std::uint64_t;

inline constexpr int kMaxSymComponents = 6; // per-symbol derivative multi-index width

Var uvar(int component);                       // u^i at jet order 0, 1-based i
Var symjet(SymbolId s, const std::vector<int>& alpha);
Var symjet1(SymbolId s, int order);            // scalar case: d^order c / du^order

bool var_is_uvar(Var v);
int uvar_component(Var v);
bool var_is_symjet(Var v);
SymbolId symjet_symbol(Var v);
int symjet_order(Var v, int component);        // entry of the multi-index
int symjet_total_order(Var v);
Var symjet_raise(Var v, int component);        // alpha += e_component

struct VarPow {
    Var v;
    std::uint32_t e;
    bool operator==(const VarPow&) const = default;
};

// Monomial in scalar variables: sorted by v ascending, exponents >= 1.
using SMono = std::vector<VarPow>;

int smono_cmp(const SMono& a, const SMono& b);

class ScalarPoly {
public:
    // Terms sorted by monomial, no zero coefficients; empty vector is 0.
    std::vector<std::pair<SMono, Rat>> t;

    ScalarPoly() = default;
    explicit ScalarPoly(const Rat& c) { if (c != 0) t.push_back({{}, c}); }
    static ScalarPoly variable(Var v) { ScalarPoly p; p.t.push_back({{{v, 1}}, Rat(1)}); return p; }

    bool is_zero() const { return t.empty(); }
    bool is_constant() const { return t.empty() || (t.size() == 1 && t[0].first.empty()); }
    Rat constant_value() const;                 // requires is_constant()
    bool operator==(const ScalarPoly&) const = default;
};

ScalarPoly operator+(const ScalarPoly& a, const ScalarPoly& b);
ScalarPoly operator-(const ScalarPoly& a, const ScalarPoly& b);
ScalarPoly operator-(const ScalarPoly& a);
ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b);
ScalarPoly operator*(const ScalarPoly& a, const Rat& c);
ScalarPoly sp_pow(const ScalarPoly& a, unsigned e);

bool sp_contains_var(const ScalarPoly& a, Var v);
int sp_degree_in(const ScalarPoly& a, Var v);
std::vector<Var> sp_vars(const ScalarPoly& a);

// Formal partial derivative with respect to one packed variable.
ScalarPoly sp_partial(const ScalarPoly& a, Var v);
// Derivation induced by d/du^i: formal partial plus the chain rule on every
// symbol jet present (raising its multi-index in slot i).
ScalarPoly sp_derive_u(const ScalarPoly& a, int component);
// Drop every term containing v (evaluation at v=0).
ScalarPoly sp_at_zero(const ScalarPoly& a, Var v);
// Exponent-bump antiderivative in v; valid when v never feeds a symbol jet.
ScalarPoly sp_antiderivative(const ScalarPoly& a, Var v);

// Exact division; nullopt if b does not divide a.
std::optional<ScalarPoly> sp_divexact(const ScalarPoly& a, const ScalarPoly& b);
// Primitive-PRS gcd, result integer-primitive with positive lead; gcd(0,0)=0.
ScalarPoly sp_gcd(const ScalarPoly& a, const ScalarPoly& b);
// Rational c such that a/c has coprime integer coefficients and positive lead.
Rat sp_rational_content(const ScalarPoly& a);

} // namespace jetalg
