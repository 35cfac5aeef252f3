#pragma once
// Coefficient field for differential polynomials: reduced fractions of
// ScalarPolys. Denominators are kept integer-primitive with a positive
// leading coefficient, so every value has exactly one representation.
// The common case (denominator 1) short-circuits all gcd work.

#include "jetalg/scalarpoly.hpp"

namespace jetalg {

class Coefficient {
public:
    Coefficient() : num_(), den_(Rat(1)) {}
    explicit Coefficient(const Rat& c) : num_(c), den_(Rat(1)) {}
    explicit Coefficient(const ScalarPoly& p) : num_(p), den_(Rat(1)) {}
    static Coefficient fraction(ScalarPoly n, ScalarPoly d);
    static Coefficient variable(Var v) { return Coefficient(ScalarPoly::variable(v)); }

    const ScalarPoly& num() const { return num_; }
    const ScalarPoly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool den_is_one() const { return den_.is_constant() && den_.constant_value() == 1; }
    bool is_rational() const { return num_.is_constant() && den_.is_constant(); }
    Rat rational_value() const { return num_.constant_value() / den_.constant_value(); }

    bool operator==(const Coefficient&) const = default;

    Coefficient operator-() const;
    Coefficient operator+(const Coefficient& o) const;
    Coefficient operator-(const Coefficient& o) const;
    Coefficient operator*(const Coefficient& o) const;
    Coefficient operator*(const Rat& c) const;
    Coefficient operator/(const Coefficient& o) const;

    // Derivation induced by d/du^i (chain rule through symbol jets,
    // quotient rule across the fraction).
    Coefficient derive_u(int component) const;

    bool contains_var(Var v) const { return sp_contains_var(num_, v) || sp_contains_var(den_, v); }
    bool has_symjets() const;
    // Antiderivative in u^i; throws NonElementaryAntiderivative conditions
    // are the caller's (diffpoly-level) responsibility — here we require the
    // denominator and symbol jets to be free of u^i and it is a logic error
    // otherwise.
    Coefficient antiderivative_u(int component) const;
    Coefficient at_zero(Var v) const;

private:
    ScalarPoly num_, den_;
};

} // namespace jetalg
