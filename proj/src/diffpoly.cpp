#include "jetalg/diffpoly.hpp"

#include <algorithm>

namespace jetalg {

/******** monomials ********/

int monomial_super_degree(const Monomial& m) { return static_cast<int>(m.odd.size()); }

int monomial_standard_degree(const Monomial& m) {
    int d = 0;
    for (Atom a : m.odd) d += atom_order(a);
    for (const auto& [a, e] : m.even) d += atom_order(a) * static_cast<int>(e);
    return d;
}

int monomial_max_order(const Monomial& m) {
    int s = -1;
    for (Atom a : m.odd) s = std::max(s, atom_order(a));
    for (const auto& [a, e] : m.even) s = std::max(s, atom_order(a));
    return s;
}

int monomial_cmp(const Monomial& a, const Monomial& b) {
    int pa = monomial_super_degree(a), pb = monomial_super_degree(b);
    if (pa != pb) return pa < pb ? -1 : 1;
    int da = monomial_standard_degree(a), db = monomial_standard_degree(b);
    if (da != db) return da < db ? -1 : 1;
    if (a.odd != b.odd) return a.odd < b.odd ? -1 : 1;
    if (a.even != b.even) return a.even < b.even ? -1 : 1;
    return 0;
}

int monomial_mul(const Monomial& a, const Monomial& b, Monomial& out) {
    out.odd.clear();
    out.even.clear();
    // merge odd lists, counting the transpositions that sort a++b
    long inversions = 0;
    size_t i = 0, j = 0;
    out.odd.reserve(a.odd.size() + b.odd.size());
    while (i < a.odd.size() && j < b.odd.size()) {
        if (a.odd[i] == b.odd[j]) return 0;
        if (a.odd[i] < b.odd[j]) out.odd.push_back(a.odd[i++]);
        else {
            inversions += static_cast<long>(a.odd.size() - i);
            out.odd.push_back(b.odd[j++]);
        }
    }
    for (; i < a.odd.size(); ++i) out.odd.push_back(a.odd[i]);
    for (; j < b.odd.size(); ++j) out.odd.push_back(b.odd[j]);
    // even multisets just merge
    size_t k = 0, l = 0;
    out.even.reserve(a.even.size() + b.even.size());
    while (k < a.even.size() && l < b.even.size()) {
        if (a.even[k].first == b.even[l].first) {
            out.even.push_back({a.even[k].first, a.even[k].second + b.even[l].second});
            ++k; ++l;
        } else if (a.even[k].first < b.even[l].first) out.even.push_back(a.even[k++]);
        else out.even.push_back(b.even[l++]);
    }
    for (; k < a.even.size(); ++k) out.even.push_back(a.even[k]);
    for (; l < b.even.size(); ++l) out.even.push_back(b.even[l]);
    return (inversions % 2 == 0) ? 1 : -1;
}

/******** construction and arithmetic ********/

DiffPoly DiffPoly::constant(int n, const Rat& c) {
    DiffPoly f(n);
    if (c != 0) f.t_.emplace(Monomial{}, Coefficient(c));
    return f;
}

DiffPoly DiffPoly::scalar(int n, const Coefficient& c) {
    DiffPoly f(n);
    if (!c.is_zero()) f.t_.emplace(Monomial{}, c);
    return f;
}

DiffPoly DiffPoly::atom(int n, Atom a) {
    if (atom_component(a) > n) throw ComponentMismatch("atom component exceeds n");
    DiffPoly f(n);
    if (atom_is_even(a) && atom_order(a) == 0)
        return scalar(n, Coefficient::variable(uvar(atom_component(a))));
    Monomial m;
    if (atom_is_odd(a)) m.odd.push_back(a);
    else m.even.push_back({a, 1});
    f.t_.emplace(std::move(m), Coefficient(Rat(1)));
    return f;
}

Coefficient DiffPoly::coefficient_of(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Coefficient() : it->second;
}

void DiffPoly::add_term(const Monomial& m, const Coefficient& c) {
    if (c.is_zero()) return;
    auto [it, fresh] = t_.emplace(m, c);
    if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero()) t_.erase(it);
    }
}

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
    if (a.components() != b.components()) throw ComponentMismatch("add: component counts differ");
    DiffPoly r = a;
    for (const auto& [m, c] : b.terms()) r.add_term(m, c);
    return r;
}

DiffPoly operator-(const DiffPoly& a) {
    DiffPoly r(a.components());
    for (const auto& [m, c] : a.terms()) r.add_term(m, -c);
    return r;
}

DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) { return a + (-b); }

DiffPoly mul(const DiffPoly& a, const DiffPoly& b) {
    if (a.components() != b.components()) throw ComponentMismatch("mul: component counts differ");
    DiffPoly r(a.components());
    Monomial prod;
    for (const auto& [ma, ca] : a.terms())
        for (const auto& [mb, cb] : b.terms()) {
            int sign = monomial_mul(ma, mb, prod);
            if (sign == 0) continue;
            Coefficient c = ca * cb;
            r.add_term(prod, sign > 0 ? c : -c);
        }
    return r;
}

DiffPoly operator*(const DiffPoly& a, const Rat& c) {
    DiffPoly r(a.components());
    if (c == 0) return r;
    for (const auto& [m, q] : a.terms()) r.add_term(m, q * c);
    return r;
}

DiffPoly operator*(const DiffPoly& a, const Coefficient& c) {
    DiffPoly r(a.components());
    for (const auto& [m, q] : a.terms()) r.add_term(m, q * c);
    return r;
}

DiffPoly dp_pow(const DiffPoly& a, unsigned e) {
    DiffPoly r = DiffPoly::constant(a.components(), Rat(1));
    DiffPoly acc = a;
    for (unsigned k = e; k; k >>= 1) {
        if (k & 1) r = mul(r, acc);
        if (k > 1) acc = mul(acc, acc);
    }
    return r;
}

/******** the total derivative ********/

DiffPoly total_derivative(const DiffPoly& f) {
    const int n = f.components();
    DiffPoly r(n);
    for (const auto& [m, c] : f.terms()) {
        // chain rule through the coefficient: d/dx c = sum_i c_{u^i} u^{i,1}
        for (int i = 1; i <= n; ++i) {
            Coefficient dc = c.derive_u(i);
            if (dc.is_zero()) continue;
            Monomial m2, unit;
            unit.even.push_back({atom_even(i, 1), 1});
            monomial_mul(m, unit, m2); // even merge, sign +1
            r.add_term(m2, dc);
        }
        // even atoms: exponent rule
        for (size_t k = 0; k < m.even.size(); ++k) {
            Monomial m2 = m;
            auto [a, e] = m.even[k];
            if (e == 1) m2.even.erase(m2.even.begin() + static_cast<long>(k));
            else m2.even[k].second -= 1;
            Monomial m3, unit;
            unit.even.push_back({atom_raise(a), 1});
            monomial_mul(m2, unit, m3);
            r.add_term(m3, c * Rat(static_cast<long>(e)));
        }
        // odd atoms: in-place raise, no sign (the raised atom stays slotted)
        for (size_t k = 0; k < m.odd.size(); ++k) {
            Atom raised = atom_raise(m.odd[k]);
            if (k + 1 < m.odd.size() && m.odd[k + 1] == raised) continue; // duplicate dies
            Monomial m2 = m;
            m2.odd[k] = raised;
            r.add_term(m2, c);
        }
    }
    return r;
}

DiffPoly total_derivative(const DiffPoly& f, int times) {
    DiffPoly r = f;
    for (int k = 0; k < times; ++k) r = total_derivative(r);
    return r;
}

/******** graded partials ********/

DiffPoly partial(const DiffPoly& f, Atom a) {
    const int n = f.components();
    DiffPoly r(n);
    if (atom_is_even(a) && atom_order(a) == 0) {
        int i = atom_component(a);
        for (const auto& [m, c] : f.terms()) r.add_term(m, c.derive_u(i));
        return r;
    }
    for (const auto& [m, c] : f.terms()) {
        if (atom_is_even(a)) {
            for (size_t k = 0; k < m.even.size(); ++k) {
                if (m.even[k].first != a) continue;
                Monomial m2 = m;
                auto e = m.even[k].second;
                if (e == 1) m2.even.erase(m2.even.begin() + static_cast<long>(k));
                else m2.even[k].second -= 1;
                r.add_term(m2, c * Rat(static_cast<long>(e)));
                break;
            }
        } else {
            for (size_t k = 0; k < m.odd.size(); ++k) {
                if (m.odd[k] != a) continue;
                Monomial m2 = m;
                m2.odd.erase(m2.odd.begin() + static_cast<long>(k));
                // left derivative: move the atom past k earlier odd factors
                r.add_term(m2, (k % 2 == 0) ? c : -c);
                break;
            }
        }
    }
    return r;
}

/******** gradings ********/

std::map<GradingKey, DiffPoly> grade(const DiffPoly& f) {
    std::map<GradingKey, DiffPoly> out;
    for (const auto& [m, c] : f.terms()) {
        GradingKey k{monomial_super_degree(m), monomial_standard_degree(m)};
        auto it = out.find(k);
        if (it == out.end()) it = out.emplace(k, DiffPoly(f.components())).first;
        it->second.add_term(m, c);
    }
    return out;
}

DiffPoly graded_piece(const DiffPoly& f, int p, int d) {
    DiffPoly r(f.components());
    for (const auto& [m, c] : f.terms())
        if (monomial_super_degree(m) == p && monomial_standard_degree(m) == d)
            r.add_term(m, c);
    return r;
}

DiffPoly standard_piece(const DiffPoly& f, int d) {
    DiffPoly r(f.components());
    for (const auto& [m, c] : f.terms())
        if (monomial_standard_degree(m) == d) r.add_term(m, c);
    return r;
}

DiffPoly standard_truncate(const DiffPoly& f, int dmax) {
    DiffPoly r(f.components());
    for (const auto& [m, c] : f.terms())
        if (monomial_standard_degree(m) <= dmax) r.add_term(m, c);
    return r;
}

int valuation(const DiffPoly& f) {
    int v = kValuationInfinity;
    for (const auto& [m, c] : f.terms()) v = std::min(v, monomial_standard_degree(m));
    return v;
}

int super_degree_if_homogeneous(const DiffPoly& f) {
    int p = -1;
    for (const auto& [m, c] : f.terms()) {
        int q = monomial_super_degree(m);
        if (p == -1) p = q;
        else if (p != q) throw NonHomogeneousInput("mixed super degrees");
    }
    return p == -1 ? 0 : p;
}

bool is_bihomogeneous(const DiffPoly& f, int& p, int& d) {
    bool first = true;
    for (const auto& [m, c] : f.terms()) {
        int q = monomial_super_degree(m), e = monomial_standard_degree(m);
        if (first) { p = q; d = e; first = false; }
        else if (p != q || d != e) return false;
    }
    if (first) { p = 0; d = 0; }
    return true;
}

int jet_order(const DiffPoly& f) {
    if (f.is_zero()) return -1;
    int s = 0;
    for (const auto& [m, c] : f.terms()) s = std::max(s, monomial_max_order(m));
    return s;
}

/******** antiderivatives ********/

DiffPoly antiderivative(const DiffPoly& f, Atom a) {
    const int n = f.components();
    DiffPoly r(n);
    if (atom_is_odd(a)) {
        if (!partial(f, a).is_zero())
            throw NonElementaryAntiderivative("odd antiderivative: integrand depends on the atom");
        return mul(DiffPoly::atom(n, a), f);
    }
    if (atom_order(a) == 0) {
        int i = atom_component(a);
        for (const auto& [m, c] : f.terms()) {
            if (sp_contains_var(c.den(), uvar(i)))
                throw NonElementaryAntiderivative("antiderivative target occurs in a denominator");
            if (c.has_symjets())
                throw NonElementaryAntiderivative("antiderivative through a function symbol");
            r.add_term(m, c.antiderivative_u(i));
        }
        return r;
    }
    for (const auto& [m, c] : f.terms()) {
        Monomial m2 = m;
        bool bumped = false;
        for (auto& [b, e] : m2.even)
            if (b == a) { e += 1; r.add_term(m2, c * Rat(1, static_cast<long>(e))); bumped = true; break; }
        if (!bumped) {
            Monomial m3, unit;
            unit.even.push_back({a, 1});
            monomial_mul(m2, unit, m3);
            r.add_term(m3, c);
        }
    }
    return r;
}

/******** substitution ********/

namespace {

// Expand one coefficient with some order-0 u-variables replaced by polynomials.
DiffPoly expand_coefficient(int n, const Coefficient& c,
                            const std::map<int, const DiffPoly*>& usubs) {
    bool denTouched = false;
    for (const auto& [i, g] : usubs)
        if (sp_contains_var(c.den(), uvar(i))) denTouched = true;
    if (denTouched)
        throw AlgebraError("subst: substituted variable occurs in a denominator");
    if (c.has_symjets() && !usubs.empty())
        throw AlgebraError("subst: cannot substitute inside a function symbol");
    DiffPoly out(n);
    Coefficient invden = Coefficient(Rat(1)) / Coefficient(c.den());
    for (const auto& [mono, q] : c.num().t) {
        DiffPoly acc = DiffPoly::scalar(n, invden * q);
        for (const auto& vp : mono) {
            if (var_is_uvar(vp.v)) {
                auto it = usubs.find(uvar_component(vp.v));
                if (it != usubs.end()) {
                    acc = mul(acc, dp_pow(*it->second, vp.e));
                    continue;
                }
            }
            ScalarPoly pw = sp_pow(ScalarPoly::variable(vp.v), vp.e);
            acc = acc * Coefficient(pw);
        }
        out = out + acc;
    }
    return out;
}

} // namespace

DiffPoly subst(const DiffPoly& f, const std::map<Atom, DiffPoly>& images) {
    const int n = f.components();
    std::map<int, const DiffPoly*> usubs;
    for (const auto& [a, g] : images) {
        if (g.components() != n) throw ComponentMismatch("subst: component counts differ");
        if (atom_is_even(a) && atom_order(a) == 0) usubs.emplace(atom_component(a), &g);
    }
    DiffPoly r(n);
    for (const auto& [m, c] : f.terms()) {
        DiffPoly acc = expand_coefficient(n, c, usubs);
        for (Atom a : m.odd) {
            auto it = images.find(a);
            acc = mul(acc, it == images.end() ? DiffPoly::atom(n, a) : it->second);
        }
        for (const auto& [a, e] : m.even) {
            auto it = images.find(a);
            DiffPoly g = it == images.end() ? DiffPoly::atom(n, a) : it->second;
            acc = mul(acc, dp_pow(g, e));
        }
        r = r + acc;
    }
    return r;
}

} // namespace jetalg
