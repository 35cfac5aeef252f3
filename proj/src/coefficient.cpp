#include "jetalg/coefficient.hpp"

#include <stdexcept>

namespace jetalg {

Coefficient Coefficient::fraction(ScalarPoly n, ScalarPoly d) {
    if (d.is_zero()) throw std::invalid_argument("Coefficient: zero denominator");
    Coefficient r;
    if (n.is_zero()) return r;
    if (d.is_constant()) {
        r.num_ = n * (1 / d.constant_value());
        r.den_ = ScalarPoly(Rat(1));
        return r;
    }
    ScalarPoly g = sp_gcd(n, d);
    if (!(g.is_constant() && g.constant_value() == 1)) {
        n = *sp_divexact(n, g);
        d = *sp_divexact(d, g);
    }
    if (d.is_constant()) {
        r.num_ = n * (1 / d.constant_value());
        r.den_ = ScalarPoly(Rat(1));
        return r;
    }
    Rat rc = sp_rational_content(d);
    r.num_ = n * (1 / rc);
    r.den_ = d * (1 / rc);
    return r;
}

Coefficient Coefficient::operator-() const {
    Coefficient r = *this;
    r.num_ = -r.num_;
    return r;
}

Coefficient Coefficient::operator+(const Coefficient& o) const {
    if (den_is_one() && o.den_is_one()) {
        Coefficient r;
        r.num_ = num_ + o.num_;
        r.den_ = ScalarPoly(Rat(1));
        return r;
    }
    if (den_ == o.den_) return fraction(num_ + o.num_, den_);
    return fraction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

Coefficient Coefficient::operator-(const Coefficient& o) const { return *this + (-o); }

Coefficient Coefficient::operator*(const Coefficient& o) const {
    if (den_is_one() && o.den_is_one()) {
        Coefficient r;
        r.num_ = num_ * o.num_;
        r.den_ = ScalarPoly(Rat(1));
        return r;
    }
    return fraction(num_ * o.num_, den_ * o.den_);
}

Coefficient Coefficient::operator*(const Rat& c) const {
    Coefficient r = *this;
    r.num_ = r.num_ * c;
    if (r.num_.is_zero()) r.den_ = ScalarPoly(Rat(1));
    return r;
}

Coefficient Coefficient::operator/(const Coefficient& o) const {
    if (o.is_zero()) throw std::invalid_argument("Coefficient: division by zero");
    return fraction(num_ * o.den_, den_ * o.num_);
}

Coefficient Coefficient::derive_u(int component) const {
    if (den_is_one()) {
        Coefficient r;
        r.num_ = sp_derive_u(num_, component);
        r.den_ = ScalarPoly(Rat(1));
        return r;
    }
    ScalarPoly dn = sp_derive_u(num_, component);
    ScalarPoly dd = sp_derive_u(den_, component);
    return fraction(dn * den_ - num_ * dd, den_ * den_);
}

bool Coefficient::has_symjets() const {
    for (const ScalarPoly* p : {&num_, &den_})
        for (const auto& [m, c] : p->t)
            for (const auto& vp : m)
                if (var_is_symjet(vp.v)) return true;
    return false;
}

Coefficient Coefficient::antiderivative_u(int component) const {
    Var v = uvar(component);
    if (sp_contains_var(den_, v) || has_symjets())
        throw std::logic_error("antiderivative_u: integrand not polynomial in the variable");
    Coefficient r;
    if (den_is_one()) {
        r.num_ = sp_antiderivative(num_, v);
        r.den_ = ScalarPoly(Rat(1));
        return r;
    }
    // constant-free denominator in v: integrate the numerator only
    return fraction(sp_antiderivative(num_, v), den_);
}

Coefficient Coefficient::at_zero(Var v) const {
    ScalarPoly d0 = sp_at_zero(den_, v);
    if (d0.is_zero()) throw std::logic_error("at_zero: denominator vanishes");
    return fraction(sp_at_zero(num_, v), d0);
}

} // namespace jetalg
