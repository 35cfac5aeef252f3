#pragma once
// Concrete (bi)hamiltonian structures for the scalar jet algebra, plus the
// hydrodynamic-type constructor for several components:
//   * the dispersionless KdV, KdV and Camassa-Holm pairs;
//   * the c(u)-deformation of the dispersionless pair through eps^4;
//   * central-invariant extraction and the omega/alpha cocycle identities;
//   * hierarchy Hamiltonians H_f and the bihamiltonian flow checks;
//   * the Camassa-Holm equation check and the eps^2 Miura equivalence.
//
// The dispersion parameter eps never appears explicitly: a density piece of
// standard degree d0 + k is the coefficient of eps^k, so "through eps^k"
// always means truncation by standard degree.

#include "varcalc/varcalc.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace structures {

using jetalg::Coefficient;
using jetalg::DiffPoly;
using jetalg::Rat;
using varcalc::LocalFunctional;

// A function of u alone (scalar case n = 1): any Coefficient qualifies, since
// coefficients are built from order-0 field variables and function symbols.
using CentralInvariant = Coefficient;

enum class Tri { Unknown, Pass, Fail };

struct PoissonPair {
    LocalFunctional P1, P2;
    Tri v11 = Tri::Unknown; // [P1,P1] = 0
    Tri v12 = Tri::Unknown; // [P1,P2] = 0
    Tri v22 = Tri::Unknown; // [P2,P2] = 0
};

// Checks the three brackets after truncating each residual to standard
// degree <= throughDegree (negative: no truncation; the brackets must vanish
// identically). Updates the tri-states and returns true iff all three pass.
bool verify_pair(PoissonPair& pair, int throughDegree = -1);

PoissonPair dkdv_pair(); // P1 = 1/2 int th th1, P2 = 1/2 int u th th1
PoissonPair kdv_pair();  // P2 gains (1/16) int th th3
PoissonPair ch_pair();   // P1 loses (1/16) int th th3

// P2 deformation series: corrections[k] is the eps^k bivector Q_{k/2},
// bihomogeneous of standard degree k+1.
struct DeformationSeries {
    PoissonPair base;
    std::map<int, LocalFunctional> corrections;

    LocalFunctional deformed_second() const; // P2 + sum of corrections
    int order() const;                       // highest stored eps order
};

// Q1(c) = 1/2 int( 3c th th3 + (9/2)c' u1 th th2
//                  + (3/2)(c'' (u1)^2 + c' u2) th th1 ).
LocalFunctional infinitesimal_from_central_invariant(const CentralInvariant& c);

// Inverse of the above on its image: c = (th th3 entry of the normalized
// operator)/3. Requires Q bihomogeneous of degree 3 with [P1,Q] = 0.
CentralInvariant central_invariant_of(const LocalFunctional& q);

// Deformation of the dispersionless pair with corrections through the given
// eps order (2 or 4); the eps^4 correction uses the A_{2,k} coefficients.
DeformationSeries deformed_pair(const CentralInvariant& c, int order);

// The three-vector cocycle identities behind the alpha construction:
// with omega_lambda = -(3/4)(c + (u - lambda)c') th th1 th2 and
// D_lambda = D_{P2} - lambda D_{P1} over the dispersionless pair,
//   (i)  D_lambda omega_lambda = 0   per lambda coefficient, and
//   (ii) d(omega_lambda) = D_lambda(alpha)  with alpha = Q1(c)'s density;
// additionally [P1,Q1] = [P2,Q1] = 0.
struct OmegaAlphaReport {
    bool cocycle = false;
    bool homotopy = false;
    bool q_closed_1 = false;
    bool q_closed_2 = false;
    bool ok() const { return cocycle && homotopy && q_closed_1 && q_closed_2; }
};
OmegaAlphaReport omega_alpha_check(const CentralInvariant& c);

// k-fold u-derivative of a function of u (chain rule through symbols).
Coefficient u_derivative(const Coefficient& f, int k);

// H_f = int[ f - c f''' u1^2 + (A1 u2^2 + A2 u1^4) ] truncated at the given
// eps order (0, 2 or 4), with A1 = 3cc'f''' + (6/5)c^2 f'''' and
// A2 = -(c'^2/2 + cc'')f'''' - cc'f^(5) - (c^2/6)f^(6).
LocalFunctional hierarchy_hamiltonian(const Coefficient& f, const CentralInvariant& c,
                                      int order);

// Given g, returns (f, g) with f'' = u g'' + g'/2 and f(0) = f'(0) = 0;
// throws NonElementaryAntiderivative unless g is polynomial in u.
std::pair<Coefficient, Coefficient> pair_hamiltonians(const Coefficient& g);

// Flow agreement for f = u^{p+2}/(p+2)!, g = 2u^{p+1}/((2p+1)(p+1)!):
// order 0 uses the dispersionless pair, order 2 the KdV pair with c = 1/24.
struct FlowCheck {
    bool agree = false;         // {u,H_f}_1 == {u,H_g}_2 through the order
    bool leading_ok = false;    // eps^0 flow equals u^p u1 / p!
    bool dispersive_ok = false; // order 2: matches the second-order KdV flow
    DiffPoly flow{1};           // the common truncated flow component
    bool ok() const { return agree && leading_ok && dispersive_ok; }
};
FlowCheck hierarchy_flow_check(int p, int order);

// Camassa-Holm: with the pair of ch_pair() in the variable w = v - (1/8)v_xx
// (an eps^2 shift), the Hamiltonians H1 = int(v^3/6 + (1/48)v v1^2) and
// H2 = int(v^2/3 + (1/24)v1^2) generate the same flow through eps^2, and
// re-expressed in v it reads w_t = v v1 - (1/12)v1 v2 - (1/24)v v3.
struct ChCheck {
    bool flows_agree = false;
    bool equation_ok = false;
    DiffPoly flow_v{1}; // the flow of w written in v-jets, truncated
    bool ok() const { return flows_agree && equation_ok; }
};
ChCheck ch_equation_check();

// eps^2 Miura equivalence: exp(ad_X) with X = -(1/16) int u2 th maps the
// Camassa-Holm pair onto deformed_pair(u/24, 2) through eps^2 (equivalently
// exp(-ad_X) maps the deformation onto the CH pair).
struct MiuraCheck {
    bool p1_ok = false;
    bool p2_ok = false;
    bool ok() const { return p1_ok && p2_ok; }
};
MiuraCheck ch_miura_check();

// Substitutes image for the even variable u^{component} together with all of
// its prolongations u^{component,s} -> d^s(image).
DiffPoly differential_subst(const DiffPoly& f, int component, const DiffPoly& image);

// Hydrodynamic-type structures: P = 1/2 int( g^{ij} th_i th_j^1
// + Gamma^{ij}_k u^{k,1} th_i th_j ), g symmetric and nondegenerate as a
// symbolic matrix. Validity is certified by the direct bracket checks.
using Matrix = std::vector<std::vector<Coefficient>>;                 // [i][j]
using Christoffel = std::vector<std::vector<std::vector<Coefficient>>>; // [i][j][k]

LocalFunctional hydro_bivector(const Matrix& g, const Christoffel& gamma);
PoissonPair hydro_pair(const Matrix& g1, const Christoffel& gamma1, const Matrix& g2,
                       const Christoffel& gamma2);

// Semisimplicity of the hydrodynamic leading part: det(g2 - lambda g1) must
// be squarefree over the function field (pairwise distinct roots; certified
// by gcd with the lambda-derivative), and for n = 1 the single root g2/g1
// must additionally be nonconstant.
struct SemisimpleVerdict {
    bool ok = false;
    std::string reason;
};
SemisimpleVerdict is_semisimple(const PoissonPair& pair);

} // namespace structures
