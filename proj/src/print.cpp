#include "jetalg/print.hpp"

#include <sstream>

namespace jetalg {

std::string atom_text(int n, Atom a) {
    std::ostringstream os;
    os << (atom_is_odd(a) ? "th" : "u");
    if (n == 1) {
        if (atom_order(a) > 0) os << atom_order(a);
    } else {
        os << "[" << atom_component(a) << "," << atom_order(a) << "]";
    }
    return os.str();
}

std::string var_text(Var v) {
    if (var_is_uvar(v)) {
        // rendered like the order-0 jet it stands for; assume scalar shorthand
        // only for component 1
        int i = uvar_component(v);
        return i == 1 ? "u" : "u[" + std::to_string(i) + ",0]";
    }
    std::string name = symbol_name(symjet_symbol(v));
    int o1 = symjet_order(v, 1);
    bool multi = false;
    for (int j = 2; j <= kMaxSymComponents; ++j)
        if (symjet_order(v, j) > 0) multi = true;
    if (!multi) {
        for (int k = 0; k < o1; ++k) name += '\'';
        return name;
    }
    name += "[";
    for (int j = 1; j <= kMaxSymComponents; ++j) {
        if (j > 1) name += ",";
        name += std::to_string(symjet_order(v, j));
    }
    return name + "]";
}

namespace {

// One scalar term as sign + factor list (rational magnitude first).
void scalar_term_text(const SMono& m, const Rat& c, bool& neg, std::string& body) {
    neg = c < 0;
    Rat mag = neg ? Rat(-c) : c;
    std::ostringstream os;
    bool emitted = false;
    if (mag != 1 || m.empty()) {
        os << mag.get_str();
        emitted = true;
    }
    for (const auto& vp : m) {
        if (emitted) os << "*";
        os << var_text(vp.v);
        if (vp.e > 1) os << "^" << vp.e;
        emitted = true;
    }
    body = os.str();
}

std::string poly_text(const ScalarPoly& p) {
    if (p.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : p.t) {
        bool neg;
        std::string body;
        scalar_term_text(m, c, neg, body);
        if (first) os << (neg ? "-" : "") << body;
        else os << (neg ? " - " : " + ") << body;
        first = false;
    }
    return os.str();
}

// Renders a coefficient as (sign, body); multi-term numerators are
// parenthesized so the result stays a single factor.
void coefficient_text(const Coefficient& c, bool& neg, std::string& body) {
    if (c.den_is_one() && c.num().t.size() == 1) {
        scalar_term_text(c.num().t[0].first, c.num().t[0].second, neg, body);
        return;
    }
    neg = false;
    body = "(" + poly_text(c.num()) + ")";
    if (!c.den_is_one()) body += "/(" + poly_text(c.den()) + ")";
}

} // namespace

std::string to_text(const ScalarPoly& p) { return poly_text(p); }

std::string to_text(const Coefficient& c) {
    if (c.is_zero()) return "0";
    bool neg;
    std::string body;
    coefficient_text(c, neg, body);
    return neg ? "-" + body : body;
}

std::string to_text(const DiffPoly& f) {
    if (f.is_zero()) return "0";
    const int n = f.components();
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        bool neg;
        std::string body;
        coefficient_text(c, neg, body);
        std::ostringstream term;
        bool skipOne = body == "1" && !(m.odd.empty() && m.even.empty());
        bool emitted = false;
        if (!skipOne) { term << body; emitted = true; }
        for (const auto& [a, e] : m.even) {
            if (emitted) term << "*";
            term << atom_text(n, a);
            if (e > 1) term << "^" << e;
            emitted = true;
        }
        for (Atom a : m.odd) {
            if (emitted) term << "*";
            term << atom_text(n, a);
            emitted = true;
        }
        if (first) os << (neg ? "-" : "") << term.str();
        else os << (neg ? " - " : " + ") << term.str();
        first = false;
    }
    return os.str();
}

} // namespace jetalg
