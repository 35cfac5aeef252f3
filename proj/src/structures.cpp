#include "structures/structures.hpp"

#include "jetalg/errors.hpp"

#include <algorithm>
#include <utility>

namespace structures {

using jetalg::AlgebraError;
using jetalg::Atom;
using jetalg::atom_even;
using jetalg::atom_odd;
using jetalg::Monomial;
using jetalg::NonElementaryAntiderivative;
using jetalg::NonHomogeneousInput;
using jetalg::rat;
using jetalg::ScalarPoly;
using jetalg::sp_contains_var;
using jetalg::sp_pow;
using jetalg::standard_piece;
using jetalg::standard_truncate;
using jetalg::total_derivative;
using jetalg::uvar;
using varcalc::dp_apply;
using varcalc::flow_components;
using varcalc::functional_equal;
using varcalc::functional_is_zero;
using varcalc::hamiltonian_flow;
using varcalc::normalize_bivector;
using varcalc::schouten;

namespace {

DiffPoly at1(Atom a) { return DiffPoly::atom(1, a); }
DiffPoly sc1(const Coefficient& c) { return DiffPoly::scalar(1, c); }

Coefficient u_coeff() { return Coefficient::variable(uvar(1)); }

Coefficient monomial_u(unsigned e, const Rat& c) {
    return Coefficient(sp_pow(ScalarPoly::variable(uvar(1)), e)) * c;
}

bool truncated_zero(const LocalFunctional& f, int throughDegree) {
    DiffPoly d = throughDegree >= 0 ? standard_truncate(f.density, throughDegree) : f.density;
    return functional_is_zero(LocalFunctional(std::move(d)));
}

// A differential polynomial with no jet atoms at all, as a Coefficient.
Coefficient as_scalar(const DiffPoly& f, const char* context) {
    if (f.is_zero()) return Coefficient();
    const auto& terms = f.terms();
    if (terms.size() != 1 || !(terms.begin()->first == Monomial{}))
        throw AlgebraError(std::string(context) + ": expected a jet-free scalar entry");
    return terms.begin()->second;
}

} // namespace

bool verify_pair(PoissonPair& pair, int throughDegree) {
    auto run = [&](const LocalFunctional& a, const LocalFunctional& b) {
        return truncated_zero(schouten(a, b), throughDegree) ? Tri::Pass : Tri::Fail;
    };
    pair.v11 = run(pair.P1, pair.P1);
    pair.v12 = run(pair.P1, pair.P2);
    pair.v22 = run(pair.P2, pair.P2);
    return pair.v11 == Tri::Pass && pair.v12 == Tri::Pass && pair.v22 == Tri::Pass;
}

PoissonPair dkdv_pair() {
    const Atom th = atom_odd(1, 0), th1 = atom_odd(1, 1), u = atom_even(1, 0);
    PoissonPair pair;
    pair.P1 = LocalFunctional(mul(at1(th), at1(th1)) * Rat(1, 2));
    pair.P2 = LocalFunctional(mul(at1(u), mul(at1(th), at1(th1))) * Rat(1, 2));
    return pair;
}

PoissonPair kdv_pair() {
    const Atom th = atom_odd(1, 0), th3 = atom_odd(1, 3);
    PoissonPair pair = dkdv_pair();
    pair.P2 = LocalFunctional(pair.P2.density + mul(at1(th), at1(th3)) * rat(1, 16));
    return pair;
}

PoissonPair ch_pair() {
    const Atom th = atom_odd(1, 0), th3 = atom_odd(1, 3);
    PoissonPair pair = dkdv_pair();
    pair.P1 = LocalFunctional(pair.P1.density - mul(at1(th), at1(th3)) * rat(1, 16));
    return pair;
}

LocalFunctional DeformationSeries::deformed_second() const {
    DiffPoly d = base.P2.density;
    for (const auto& [k, q] : corrections) d = d + q.density;
    return LocalFunctional(std::move(d));
}

int DeformationSeries::order() const {
    return corrections.empty() ? 0 : corrections.rbegin()->first;
}

LocalFunctional infinitesimal_from_central_invariant(const CentralInvariant& c) {
    const Coefficient c1 = c.derive_u(1), c2 = c1.derive_u(1);
    const Atom u1 = atom_even(1, 1), u2 = atom_even(1, 2);
    const Atom th = atom_odd(1, 0), th1 = atom_odd(1, 1), th2 = atom_odd(1, 2),
               th3 = atom_odd(1, 3);
    DiffPoly d = sc1(c * rat(3, 2)) * mul(at1(th), at1(th3))
               + sc1(c1 * rat(9, 4)) * mul(at1(u1), mul(at1(th), at1(th2)))
               + sc1(c2 * rat(3, 4)) * mul(dp_pow(at1(u1), 2), mul(at1(th), at1(th1)))
               + sc1(c1 * rat(3, 4)) * mul(at1(u2), mul(at1(th), at1(th1)));
    return LocalFunctional(std::move(d));
}

CentralInvariant central_invariant_of(const LocalFunctional& q) {
    if (q.density.is_zero()) return Coefficient();
    int p = 0, d = 0;
    if (!jetalg::is_bihomogeneous(q.density, p, d) || p != 2 || d != 3)
        throw NonHomogeneousInput(
            "central_invariant_of: expected a bihomogeneous bivector of standard degree 3");
    if (!functional_is_zero(schouten(dkdv_pair().P1, q)))
        throw AlgebraError("central_invariant_of: bivector is not closed under the first structure");
    const auto op = normalize_bivector(q);
    const auto& e = op.entry(1, 1);
    if (e.size() <= 3) return Coefficient();
    return as_scalar(e[3], "central_invariant_of") * rat(1, 3);
}

namespace {

DiffPoly second_correction_density(const CentralInvariant& c) {
    const Coefficient c1 = c.derive_u(1), c2 = c1.derive_u(1), c3 = c2.derive_u(1),
                      c4 = c3.derive_u(1);
    const Coefficient b1 = c1 * c1 + c * c2;
    const Coefficient b2 = c1 * c2 * Rat(3) + c * c3;
    const Coefficient b3 = c2 * c2 * Rat(3) + c1 * c3 * Rat(4) + c * c4;
    const Atom u1 = atom_even(1, 1), u2 = atom_even(1, 2), u3 = atom_even(1, 3),
               u4 = atom_even(1, 4);
    const Atom th = atom_odd(1, 0), th1 = atom_odd(1, 1), th2 = atom_odd(1, 2),
               th3 = atom_odd(1, 3), th4 = atom_odd(1, 4), th5 = atom_odd(1, 5);

    DiffPoly a20 = sc1(c * c1 * Rat(9));
    DiffPoly a21 = sc1(b1 * rat(45, 2)) * at1(u1);
    DiffPoly a22 = sc1(b1 * Rat(27)) * at1(u2) + sc1(b2 * Rat(18)) * dp_pow(at1(u1), 2);
    DiffPoly a23 = sc1(b1 * Rat(18)) * at1(u3)
                 + sc1(b2 * Rat(27)) * mul(at1(u1), at1(u2))
                 + sc1(b3 * rat(9, 2)) * dp_pow(at1(u1), 3);
    DiffPoly a24 = sc1(b1 * rat(9, 2)) * at1(u4)
                 + sc1(b2 * Rat(9)) * mul(at1(u1), at1(u3))
                 + sc1(b2 * rat(9, 2)) * dp_pow(at1(u2), 2)
                 + sc1(b3 * rat(9, 2)) * mul(dp_pow(at1(u1), 2), at1(u2));

    DiffPoly d = mul(a20, mul(at1(th), at1(th5))) + mul(a21, mul(at1(th), at1(th4)))
               + mul(a22, mul(at1(th), at1(th3))) + mul(a23, mul(at1(th), at1(th2)))
               + mul(a24, mul(at1(th), at1(th1)));
    return d * Rat(1, 2);
}

} // namespace

DeformationSeries deformed_pair(const CentralInvariant& c, int order) {
    if (order != 2 && order != 4)
        throw AlgebraError("deformed_pair: order must be 2 or 4 (use the deformation solver beyond that)");
    DeformationSeries s;
    s.base = dkdv_pair();
    s.corrections.emplace(2, infinitesimal_from_central_invariant(c));
    if (order == 4) s.corrections.emplace(4, LocalFunctional(second_correction_density(c)));
    return s;
}

OmegaAlphaReport omega_alpha_check(const CentralInvariant& c) {
    const PoissonPair pair = dkdv_pair();
    const Coefficient c1 = c.derive_u(1);
    const Atom th = atom_odd(1, 0), th1 = atom_odd(1, 1), th2 = atom_odd(1, 2);
    const DiffPoly frame = mul(at1(th), mul(at1(th1), at1(th2)));

    // omega_lambda = w0 + lambda w1
    const DiffPoly w0 = sc1((c + u_coeff() * c1) * rat(-3, 4)) * frame;
    const DiffPoly w1 = sc1(c1 * rat(3, 4)) * frame;

    const LocalFunctional q = infinitesimal_from_central_invariant(c);
    const DiffPoly alpha = q.density;

    auto d1 = [&](const DiffPoly& f) { return dp_apply(pair.P1, f); };
    auto d2 = [&](const DiffPoly& f) { return dp_apply(pair.P2, f); };

    OmegaAlphaReport r;
    // (D2 - lambda D1)(w0 + lambda w1) per lambda power.
    r.cocycle = d2(w0).is_zero() && (d2(w1) - d1(w0)).is_zero() && d1(w1).is_zero();
    // d(w0 + lambda w1) = (D2 - lambda D1)(alpha) per lambda power.
    r.homotopy = total_derivative(w0) == d2(alpha) && total_derivative(w1) == -d1(alpha);
    r.q_closed_1 = functional_is_zero(schouten(pair.P1, q));
    r.q_closed_2 = functional_is_zero(schouten(pair.P2, q));
    return r;
}

Coefficient u_derivative(const Coefficient& f, int k) {
    Coefficient r = f;
    for (int i = 0; i < k; ++i) r = r.derive_u(1);
    return r;
}

LocalFunctional hierarchy_hamiltonian(const Coefficient& f, const CentralInvariant& c,
                                      int order) {
    if (order != 0 && order != 2 && order != 4)
        throw AlgebraError("hierarchy_hamiltonian: order must be 0, 2 or 4");
    const Atom u1 = atom_even(1, 1), u2 = atom_even(1, 2);
    DiffPoly d = sc1(f);
    if (order >= 2) d = d - sc1(c * u_derivative(f, 3)) * dp_pow(at1(u1), 2);
    if (order >= 4) {
        const Coefficient c1 = c.derive_u(1);
        const Coefficient f4 = u_derivative(f, 4);
        const Coefficient a1 = c * c1 * u_derivative(f, 3) * Rat(3) + c * c * f4 * rat(6, 5);
        const Coefficient a2 = -(c1 * c1 * rat(1, 2) + c * c.derive_u(1).derive_u(1)) * f4
                               - c * c1 * u_derivative(f, 5)
                               - c * c * u_derivative(f, 6) * rat(1, 6);
        d = d + mul(sc1(a1), dp_pow(at1(u2), 2)) + mul(sc1(a2), dp_pow(at1(u1), 4));
    }
    return LocalFunctional(std::move(d));
}

std::pair<Coefficient, Coefficient> pair_hamiltonians(const Coefficient& g) {
    if (g.has_symjets() || (!g.den_is_one() && sp_contains_var(g.den(), uvar(1))))
        throw NonElementaryAntiderivative("pair_hamiltonians: g must be polynomial in u");
    const Coefficient g1 = g.derive_u(1);
    const Coefficient h = u_coeff() * g1.derive_u(1) + g1 * rat(1, 2);
    return {h.antiderivative_u(1).antiderivative_u(1), g};
}

FlowCheck hierarchy_flow_check(int p, int order) {
    if (p < 0) throw AlgebraError("hierarchy_flow_check: p must be nonnegative");
    if (order != 0 && order != 2)
        throw AlgebraError("hierarchy_flow_check: order must be 0 or 2");

    const Coefficient g = monomial_u(static_cast<unsigned>(p + 1),
                                     Rat(2) / (Rat(2 * p + 1) * jetalg::factorial(p + 1)));
    const Coefficient f = pair_hamiltonians(g).first;
    if (!(f == monomial_u(static_cast<unsigned>(p + 2), Rat(1) / jetalg::factorial(p + 2))))
        throw AlgebraError("hierarchy_flow_check: internal Hamiltonian inconsistency");

    const PoissonPair pair = order == 0 ? dkdv_pair() : kdv_pair();
    const Coefficient c = order == 0 ? Coefficient() : Coefficient(rat(1, 24));
    const LocalFunctional hf = hierarchy_hamiltonian(f, c, order);
    const LocalFunctional hg = hierarchy_hamiltonian(g, c, order);

    const DiffPoly x1 = standard_truncate(
        flow_components(hamiltonian_flow(pair.P1, hf))[0], order + 1);
    const DiffPoly x2 = standard_truncate(
        flow_components(hamiltonian_flow(pair.P2, hg))[0], order + 1);

    FlowCheck r;
    r.agree = x1 == x2;
    r.flow = x1;
    const Atom u1 = atom_even(1, 1), u2 = atom_even(1, 2), u3 = atom_even(1, 3);
    r.leading_ok = standard_piece(x1, 1)
                   == sc1(monomial_u(static_cast<unsigned>(p), Rat(1) / jetalg::factorial(p)))
                          * at1(u1);
    if (order == 0) {
        r.dispersive_ok = true;
    } else {
        const DiffPoly target = sc1(u_derivative(f, 2)) * at1(u1)
            + (sc1(u_derivative(f, 3) * Rat(2)) * at1(u3)
               + sc1(u_derivative(f, 4) * Rat(4)) * mul(at1(u1), at1(u2))
               + sc1(u_derivative(f, 5)) * dp_pow(at1(u1), 3))
                  * rat(1, 24);
        r.dispersive_ok = x1 == target;
    }
    return r;
}

DiffPoly differential_subst(const DiffPoly& f, int component, const DiffPoly& image) {
    int smax = 0;
    for (const auto& [m, c] : f.terms())
        for (const auto& [a, e] : m.even)
            if (jetalg::atom_component(a) == component)
                smax = std::max(smax, static_cast<int>(jetalg::atom_order(a)));
    std::map<Atom, DiffPoly> images;
    DiffPoly der = image;
    images.emplace(atom_even(component, 0), der);
    for (int s = 1; s <= smax; ++s) {
        der = total_derivative(der);
        images.emplace(atom_even(component, static_cast<unsigned>(s)), der);
    }
    return subst(f, images);
}

ChCheck ch_equation_check() {
    const Atom u0 = atom_even(1, 0), u1 = atom_even(1, 1), u2 = atom_even(1, 2),
               u3 = atom_even(1, 3);
    const PoissonPair pair = ch_pair();

    // Densities in v-jets; the pair lives in w = v - (1/8)v_xx.
    const DiffPoly h1v = dp_pow(at1(u0), 3) * rat(1, 6)
                       + mul(at1(u0), dp_pow(at1(u1), 2)) * rat(1, 48);
    const DiffPoly h2v = dp_pow(at1(u0), 2) * rat(1, 3) + dp_pow(at1(u1), 2) * rat(1, 24);

    // v = w + (1/8)w_xx through eps^2.
    const DiffPoly v_in_w = at1(u0) + at1(u2) * rat(1, 8);
    const LocalFunctional h1(standard_truncate(differential_subst(h1v, 1, v_in_w), 2));
    const LocalFunctional h2(standard_truncate(differential_subst(h2v, 1, v_in_w), 2));

    const DiffPoly x1 = standard_truncate(
        flow_components(hamiltonian_flow(pair.P1, h1))[0], 3);
    const DiffPoly x2 = standard_truncate(
        flow_components(hamiltonian_flow(pair.P2, h2))[0], 3);

    ChCheck r;
    r.flows_agree = x1 == x2;

    // Re-express w_t in v-jets: w = v - (1/8)v_xx.
    const DiffPoly w_in_v = at1(u0) - at1(u2) * rat(1, 8);
    r.flow_v = standard_truncate(differential_subst(x1, 1, w_in_v), 3);
    const DiffPoly target = mul(at1(u0), at1(u1))
                          - mul(at1(u1), at1(u2)) * rat(1, 12)
                          - mul(at1(u0), at1(u3)) * rat(1, 24);
    r.equation_ok = r.flow_v == target;
    return r;
}

MiuraCheck ch_miura_check() {
    const Atom u2 = atom_even(1, 2), th = atom_odd(1, 0);
    const LocalFunctional x(mul(at1(u2), at1(th)) * rat(-1, 16));
    const PoissonPair ch = ch_pair();
    const DeformationSeries defo = deformed_pair(u_coeff() * rat(1, 24), 2);

    auto push = [&](const LocalFunctional& p) {
        return LocalFunctional(standard_truncate(p.density + schouten(x, p).density, 3));
    };
    MiuraCheck r;
    r.p1_ok = functional_equal(push(ch.P1), defo.base.P1);
    r.p2_ok = functional_equal(push(ch.P2),
                               LocalFunctional(standard_truncate(defo.deformed_second().density, 3)));
    return r;
}

namespace {

Coefficient det_coeff(const Matrix& m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    Coefficient acc;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        Matrix minor;
        minor.reserve(n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Coefficient> row;
            row.reserve(n - 1);
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        Coefficient term = m[0][j] * det_coeff(minor);
        acc = j % 2 == 0 ? acc + term : acc - term;
    }
    return acc;
}

void check_metric(const Matrix& g, const Christoffel& gamma) {
    const std::size_t n = g.size();
    if (n == 0) throw AlgebraError("hydro_pair: empty metric");
    for (const auto& row : g)
        if (row.size() != n) throw AlgebraError("hydro_pair: metric is not square");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (!(g[i][j] == g[j][i])) throw AlgebraError("hydro_pair: metric is not symmetric");
    if (det_coeff(g).is_zero()) throw AlgebraError("hydro_pair: degenerate metric");
    if (!gamma.empty() && (gamma.size() != n || gamma[0].size() != n || gamma[0][0].size() != n))
        throw AlgebraError("hydro_pair: connection has wrong shape");
}

// Polynomials in lambda over the coefficient field, for the semisimplicity test.
using LPoly = std::vector<Coefficient>;

void lp_trim(LPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

LPoly lp_add(const LPoly& a, const LPoly& b) {
    LPoly r(std::max(a.size(), b.size()));
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (i < a.size()) r[i] = r[i] + a[i];
        if (i < b.size()) r[i] = r[i] + b[i];
    }
    lp_trim(r);
    return r;
}

LPoly lp_mul(const LPoly& a, const LPoly& b) {
    if (a.empty() || b.empty()) return {};
    LPoly r(a.size() + b.size() - 1);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = r[i + j] + a[i] * b[j];
    lp_trim(r);
    return r;
}

LPoly lp_neg(const LPoly& a) {
    LPoly r = a;
    for (auto& c : r) c = -c;
    return r;
}

LPoly lp_derivative(const LPoly& a) {
    if (a.size() < 2) return {};
    LPoly r(a.size() - 1);
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * Rat(static_cast<long>(i));
    lp_trim(r);
    return r;
}

LPoly lp_rem(LPoly a, const LPoly& b) {
    while (a.size() >= b.size() && !a.empty()) {
        const Coefficient q = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i)
            a[shift + i] = a[shift + i] - b[i] * q;
        lp_trim(a);
    }
    return a;
}

// Degree of gcd(a,b) over the rational-function field.
int lp_gcd_degree(LPoly a, LPoly b) {
    lp_trim(a);
    lp_trim(b);
    while (!b.empty()) {
        LPoly r = lp_rem(std::move(a), b);
        a = std::move(b);
        b = std::move(r);
    }
    return static_cast<int>(a.size()) - 1;
}

LPoly lp_det(std::vector<std::vector<LPoly>> m) {
    const std::size_t n = m.size();
    if (n == 1) return m[0][0];
    LPoly acc;
    for (std::size_t j = 0; j < n; ++j) {
        if (m[0][j].empty()) continue;
        std::vector<std::vector<LPoly>> minor;
        minor.reserve(n - 1);
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<LPoly> row;
            row.reserve(n - 1);
            for (std::size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        LPoly term = lp_mul(m[0][j], lp_det(std::move(minor)));
        acc = lp_add(acc, j % 2 == 0 ? term : lp_neg(term));
    }
    return acc;
}

Matrix leading_metric(const LocalFunctional& p, int n) {
    const auto op = normalize_bivector(LocalFunctional(standard_truncate(p.density, 1)));
    Matrix g(n, std::vector<Coefficient>(n));
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const auto& e = op.entry(i, j);
            if (e.size() > 1) g[i - 1][j - 1] = as_scalar(e[1], "is_semisimple");
        }
    return g;
}

bool coefficient_constant(const Coefficient& c, int n) {
    for (int i = 1; i <= n; ++i)
        if (!c.derive_u(i).is_zero()) return false;
    return true;
}

} // namespace

LocalFunctional hydro_bivector(const Matrix& g, const Christoffel& gamma) {
    check_metric(g, gamma);
    const int n = static_cast<int>(g.size());
    DiffPoly d(n);
    for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) {
            const DiffPoly thi = DiffPoly::atom(n, atom_odd(i, 0));
            const DiffPoly thj1 = DiffPoly::atom(n, atom_odd(j, 1));
            d = d + DiffPoly::scalar(n, g[i - 1][j - 1]) * mul(thi, thj1);
            if (gamma.empty()) continue;
            const DiffPoly thj = DiffPoly::atom(n, atom_odd(j, 0));
            for (int k = 1; k <= n; ++k)
                d = d
                    + DiffPoly::scalar(n, gamma[i - 1][j - 1][k - 1])
                          * mul(DiffPoly::atom(n, atom_even(k, 1)), mul(thi, thj));
        }
    return LocalFunctional(d * Rat(1, 2));
}

PoissonPair hydro_pair(const Matrix& g1, const Christoffel& gamma1, const Matrix& g2,
                       const Christoffel& gamma2) {
    PoissonPair pair;
    pair.P1 = hydro_bivector(g1, gamma1);
    pair.P2 = hydro_bivector(g2, gamma2);
    verify_pair(pair);
    return pair;
}

SemisimpleVerdict is_semisimple(const PoissonPair& pair) {
    const int n = pair.P1.components();
    const Matrix g1 = leading_metric(pair.P1, n);
    const Matrix g2 = leading_metric(pair.P2, n);

    std::vector<std::vector<LPoly>> pencil(n, std::vector<LPoly>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            pencil[i][j] = {g2[i][j], -g1[i][j]};
            lp_trim(pencil[i][j]);
        }
    LPoly charpoly = lp_det(std::move(pencil));
    lp_trim(charpoly);
    if (static_cast<int>(charpoly.size()) != n + 1)
        return {false, "characteristic polynomial of the pencil is degenerate"};
    if (lp_gcd_degree(charpoly, lp_derivative(charpoly)) != 0)
        return {false, "pencil roots are not pairwise distinct"};
    if (n == 1) {
        const Coefficient root = g2[0][0] / g1[0][0];
        if (coefficient_constant(root, n)) return {false, "pencil root is constant"};
    }
    return {true, "pairwise distinct" + std::string(n == 1 ? ", nonconstant" : "") + " pencil roots"};
}

} // namespace structures
