#pragma once
// Variational calculus on local functionals: variational derivatives,
// functional equality (modulo total derivatives and constants), the Schouten
// bracket, the derivation D_P attached to a p-vector, Poisson brackets and
// flows, and normalization of bivectors into Hamiltonian operators.
//
// Convention sheet (validated en bloc by the worked-example tests):
//   * odd partials use the left-derivative convention;
//   * [P,Q] = int( delta^i P * delta_i Q + (-1)^p delta_i P * delta^i Q );
//   * D_P = sum_s( d^s(delta^i P) d/du^{i,s} + (-1)^p d^s(delta_i P) d/dth_i^s );
//   * {F,G}_P = -[F,[P,G]];  Hamiltonian flow X = -[P,H].

#include "jetalg/diffpoly.hpp"
#include "jetalg/print.hpp"

#include <string>
#include <vector>

namespace varcalc {

using jetalg::Atom;
using jetalg::Coefficient;
using jetalg::DiffPoly;
using jetalg::Rat;

struct LocalFunctional {
    DiffPoly density;
    int super_degree = 0;

    LocalFunctional() : density(1) {}
    explicit LocalFunctional(DiffPoly d)
        : density(std::move(d)), super_degree(jetalg::super_degree_if_homogeneous(density)) {}

    int components() const { return density.components(); }
};

DiffPoly var_deriv_even(const DiffPoly& f, int i); // delta_i
DiffPoly var_deriv_odd(const DiffPoly& f, int i);  // delta^i
inline DiffPoly var_deriv_even(const LocalFunctional& f, int i) { return var_deriv_even(f.density, i); }
inline DiffPoly var_deriv_odd(const LocalFunctional& f, int i) { return var_deriv_odd(f.density, i); }

// F = 0 in F-hat iff every variational derivative vanishes and the density
// has no pure-constant part (distinct constants are distinct functionals).
bool functional_is_zero(const LocalFunctional& f);
bool functional_equal(const LocalFunctional& f, const LocalFunctional& g);

LocalFunctional schouten(const LocalFunctional& p, const LocalFunctional& q);
DiffPoly dp_apply(const LocalFunctional& p, const DiffPoly& f);

// Both sides of the homomorphism identity applied to every generator
// u^{i,s}, th_i^s with s <= jet bound (default 2 + max input jet order).
bool d_homomorphism_check(const LocalFunctional& p, const LocalFunctional& q, int jetBound = -1);

struct Verdict {
    bool ok;
    LocalFunctional residual;
};

Verdict is_poisson(const LocalFunctional& p);
Verdict is_compatible(const LocalFunctional& p1, const LocalFunctional& p2);

// P = 1/2 int( P^{ij}_s th_i th_j^s ) with the skew normalization; entry(i,j)
// is the coefficient list of the operator sum_s P^{ij}_s d^s.
struct HamiltonianOperator {
    int n = 1;
    std::vector<std::vector<std::vector<DiffPoly>>> entries; // [i-1][j-1][s]

    const std::vector<DiffPoly>& entry(int i, int j) const { return entries[i - 1][j - 1]; }
};

HamiltonianOperator normalize_bivector(const LocalFunctional& p);
LocalFunctional reassemble(const HamiltonianOperator& op);
bool operator_skew_check(const HamiltonianOperator& op);
// (P-hat w)^i for an even argument vector w.
std::vector<DiffPoly> operator_apply(const HamiltonianOperator& op, const std::vector<DiffPoly>& w);

LocalFunctional poisson_bracket(const LocalFunctional& p, const LocalFunctional& f,
                                const LocalFunctional& g);
LocalFunctional hamiltonian_flow(const LocalFunctional& p, const LocalFunctional& h);
// Evolutionary components X^i = delta^i(density) of a 1-vector.
std::vector<DiffPoly> flow_components(const LocalFunctional& x);

std::string render_delta_notation(const LocalFunctional& p);

inline std::string to_text(const LocalFunctional& f) {
    return "int(" + jetalg::to_text(f.density) + ")";
}

} // namespace varcalc
