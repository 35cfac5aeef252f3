#include "varcalc/varcalc.hpp"

#include "jetalg/errors.hpp"

#include <sstream>

namespace varcalc {

using jetalg::atom_even;
using jetalg::atom_odd;
using jetalg::Monomial;
using jetalg::NonHomogeneousInput;

namespace {

DiffPoly var_deriv(const DiffPoly& f, Atom base) {
    DiffPoly acc(f.components());
    int top = jetalg::jet_order(f);
    for (int s = 0; s <= top; ++s) {
        DiffPoly pf = partial(f, base + static_cast<Atom>(s));
        // accumulate (-d)^s applied to the partial
        for (int k = 0; k < s; ++k) pf = -total_derivative(pf);
        acc = acc + pf;
    }
    return acc;
}

} // namespace

DiffPoly var_deriv_even(const DiffPoly& f, int i) { return var_deriv(f, atom_even(i, 0)); }
DiffPoly var_deriv_odd(const DiffPoly& f, int i) { return var_deriv(f, atom_odd(i, 0)); }

bool functional_is_zero(const LocalFunctional& f) {
    if (!f.density.coefficient_of(Monomial{}).is_zero()) return false;
    for (int i = 1; i <= f.components(); ++i) {
        if (!var_deriv_even(f.density, i).is_zero()) return false;
        if (!var_deriv_odd(f.density, i).is_zero()) return false;
    }
    return true;
}

bool functional_equal(const LocalFunctional& f, const LocalFunctional& g) {
    return functional_is_zero(LocalFunctional(f.density - g.density));
}

LocalFunctional schouten(const LocalFunctional& p, const LocalFunctional& q) {
    const int n = p.components();
    if (n != q.components()) throw jetalg::ComponentMismatch("schouten: component counts differ");
    DiffPoly density(n);
    bool oddP = p.super_degree % 2 != 0;
    for (int i = 1; i <= n; ++i) {
        DiffPoly a = mul(var_deriv_odd(p.density, i), var_deriv_even(q.density, i));
        DiffPoly b = mul(var_deriv_even(p.density, i), var_deriv_odd(q.density, i));
        density = density + a + (oddP ? -b : b);
    }
    return LocalFunctional(density);
}

DiffPoly dp_apply(const LocalFunctional& p, const DiffPoly& f) {
    const int n = p.components();
    if (n != f.components()) throw jetalg::ComponentMismatch("dp_apply: component counts differ");
    bool oddP = p.super_degree % 2 != 0;
    DiffPoly r(n);
    int top = jetalg::jet_order(f);
    for (int i = 1; i <= n; ++i) {
        DiffPoly a = var_deriv_odd(p.density, i);  // multiplies d/du^{i,s}
        DiffPoly b = var_deriv_even(p.density, i); // multiplies d/dth_i^s
        for (int s = 0; s <= top; ++s) {
            DiffPoly pu = partial(f, atom_even(i, s));
            if (!pu.is_zero()) r = r + mul(a, pu);
            DiffPoly pt = partial(f, atom_odd(i, s));
            if (!pt.is_zero()) {
                DiffPoly term = mul(b, pt);
                r = r + (oddP ? -term : term);
            }
            if (s < top) {
                a = total_derivative(a);
                b = total_derivative(b);
            }
        }
    }
    return r;
}

bool d_homomorphism_check(const LocalFunctional& p, const LocalFunctional& q, int jetBound) {
    const int n = p.components();
    if (jetBound < 0)
        jetBound = 2 + std::max(jetalg::jet_order(p.density), jetalg::jet_order(q.density));
    LocalFunctional pq = schouten(p, q);
    int pp = p.super_degree - 1, qq = q.super_degree - 1;
    bool innerSign = (pp * qq) % 2 != 0;      // [D_P,D_Q] = D_P D_Q - (-1)^{pp qq} D_Q D_P
    bool outerSign = ((p.super_degree - 1) % 2 + 2) % 2 != 0; // (-1)^{p-1}
    for (int i = 1; i <= n; ++i) {
        for (int s = 0; s <= jetBound; ++s) {
            for (Atom g : {atom_even(i, s), atom_odd(i, s)}) {
                DiffPoly gen = DiffPoly::atom(n, g);
                DiffPoly lhs = dp_apply(pq, gen);
                DiffPoly inner = dp_apply(p, dp_apply(q, gen));
                DiffPoly swapped = dp_apply(q, dp_apply(p, gen));
                DiffPoly rhs = innerSign ? inner + swapped : inner - swapped;
                if (outerSign) rhs = -rhs;
                if (!(lhs == rhs)) return false;
            }
        }
    }
    return true;
}

Verdict is_poisson(const LocalFunctional& p) {
    if (p.super_degree != 2) throw NonHomogeneousInput("is_poisson: super degree must be 2");
    LocalFunctional r = schouten(p, p);
    return {functional_is_zero(r), r};
}

Verdict is_compatible(const LocalFunctional& p1, const LocalFunctional& p2) {
    if (p1.super_degree != 2 || p2.super_degree != 2)
        throw NonHomogeneousInput("is_compatible: super degree must be 2");
    LocalFunctional r = schouten(p1, p2);
    return {functional_is_zero(r), r};
}

HamiltonianOperator normalize_bivector(const LocalFunctional& p) {
    if (p.super_degree != 2) throw NonHomogeneousInput("normalize_bivector: super degree must be 2");
    const int n = p.components();
    HamiltonianOperator op;
    op.n = n;
    op.entries.assign(n, std::vector<std::vector<DiffPoly>>(n));
    for (int i = 1; i <= n; ++i) {
        DiffPoly e = var_deriv_odd(p.density, i); // = sum_{j,s} P^{ij}_s th_j^s
        for (const auto& [m, c] : e.terms()) {
            if (m.odd.size() != 1)
                throw NonHomogeneousInput("normalize_bivector: unexpected shape");
            Atom th = m.odd[0];
            int j = jetalg::atom_component(th), s = jetalg::atom_order(th);
            auto& col = op.entries[i - 1][j - 1];
            if (static_cast<int>(col.size()) <= s) col.resize(s + 1, DiffPoly(n));
            Monomial even;
            even.even = m.even;
            col[static_cast<size_t>(s)].add_term(even, c);
        }
    }
    return op;
}

LocalFunctional reassemble(const HamiltonianOperator& op) {
    const int n = op.n;
    DiffPoly density(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const auto& col = op.entries[i - 1][j - 1];
            for (size_t s = 0; s < col.size(); ++s) {
                if (col[s].is_zero()) continue;
                DiffPoly term = mul(DiffPoly::atom(n, atom_odd(i, 0)),
                                    mul(col[s], DiffPoly::atom(n, atom_odd(j, static_cast<int>(s)))));
                density = density + term * Rat(1, 2);
            }
        }
    return LocalFunctional(density);
}

bool operator_skew_check(const HamiltonianOperator& op) {
    const int n = op.n;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            // expand -(sum_s (-d)^s . P^{ji}_s) into normal form and compare
            const auto& tr = op.entries[j - 1][i - 1];
            std::vector<DiffPoly> normal;
            for (size_t s = 0; s < tr.size(); ++s) {
                if (tr[s].is_zero()) continue;
                // (-1)^{s+1} d^s . (P^{ji}_s .) = sum_k (-1)^{s+1} C(s,k) d^{s-k}(P^{ji}_s) d^k
                DiffPoly ds = tr[s];
                std::vector<DiffPoly> derivs{ds};
                for (size_t k = 0; k < s; ++k) derivs.push_back(total_derivative(derivs.back()));
                for (size_t k = 0; k <= s; ++k) {
                    Rat coef = jetalg::binomial(static_cast<unsigned>(s), static_cast<unsigned>(k));
                    if (s % 2 == 0) coef = -coef; // (-1)^{s+1}
                    if (normal.size() <= k) normal.resize(k + 1, DiffPoly(n));
                    normal[k] = normal[k] + derivs[s - k] * coef;
                }
            }
            const auto& fw = op.entries[i - 1][j - 1];
            size_t top = std::max(fw.size(), normal.size());
            for (size_t s = 0; s < top; ++s) {
                DiffPoly a = s < fw.size() ? fw[s] : DiffPoly(n);
                DiffPoly b = s < normal.size() ? normal[s] : DiffPoly(n);
                if (!(a == b)) return false;
            }
        }
    return true;
}

std::vector<DiffPoly> operator_apply(const HamiltonianOperator& op, const std::vector<DiffPoly>& w) {
    const int n = op.n;
    std::vector<DiffPoly> out(n, DiffPoly(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const auto& col = op.entries[i - 1][j - 1];
            DiffPoly dw = w[static_cast<size_t>(j - 1)];
            for (size_t s = 0; s < col.size(); ++s) {
                if (!col[s].is_zero()) out[i - 1] = out[i - 1] + mul(col[s], dw);
                dw = total_derivative(dw);
            }
        }
    return out;
}

LocalFunctional poisson_bracket(const LocalFunctional& p, const LocalFunctional& f,
                                const LocalFunctional& g) {
    if (p.super_degree != 2) throw NonHomogeneousInput("poisson_bracket: P must be a bivector");
    LocalFunctional inner = schouten(p, g);
    LocalFunctional outer = schouten(f, inner);
    return LocalFunctional(-outer.density);
}

LocalFunctional hamiltonian_flow(const LocalFunctional& p, const LocalFunctional& h) {
    if (p.super_degree != 2) throw NonHomogeneousInput("hamiltonian_flow: P must be a bivector");
    LocalFunctional b = schouten(p, h);
    return LocalFunctional(-b.density);
}

std::vector<DiffPoly> flow_components(const LocalFunctional& x) {
    std::vector<DiffPoly> out;
    for (int i = 1; i <= x.components(); ++i) out.push_back(var_deriv_odd(x.density, i));
    return out;
}

std::string render_delta_notation(const LocalFunctional& p) {
    HamiltonianOperator op = normalize_bivector(p);
    const int n = op.n;
    std::ostringstream os;
    bool anyLine = false;
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const auto& col = op.entries[i - 1][j - 1];
            bool any = false;
            for (const auto& e : col)
                if (!e.is_zero()) any = true;
            if (!any) continue;
            if (anyLine) os << "\n";
            anyLine = true;
            if (n == 1) os << "{u(x), u(y)} = ";
            else os << "{u[" << i << "](x), u[" << j << "](y)} = ";
            bool first = true;
            for (size_t s = col.size(); s-- > 0;) {
                if (col[s].is_zero()) continue;
                std::string txt = jetalg::to_text(col[s]);
                bool neg = false;
                if (!txt.empty() && txt[0] == '-') { neg = true; txt = txt.substr(1); }
                if (txt.find(" + ") != std::string::npos || txt.find(" - ") != std::string::npos)
                    txt = "(" + txt + ")";
                std::string delta = s == 0 ? "d(x-y)"
                                  : s == 1 ? "d'(x-y)"
                                  : s == 2 ? "d''(x-y)"
                                           : "d^(" + std::to_string(s) + ")(x-y)";
                std::string term = txt == "1" ? delta : txt + "*" + delta;
                if (first) os << (neg ? "-" : "") << term;
                else os << (neg ? " - " : " + ") << term;
                first = false;
            }
        }
    if (!anyLine) return "0";
    return os.str();
}

} // namespace varcalc
