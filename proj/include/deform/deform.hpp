#pragma once
// Deformation machinery over the scalar jet algebra: the order-by-order
// extension of an infinitesimal deformation of the second Poisson structure,
// the Miura action exp(ad_X), trivialization of exact bivector cocycles, and
// the executable homotopy / reduction / Euler-solve operators used by the
// cohomology-triviality arguments.
//
// Linear solving works over the polynomial sector: unknown densities are
// spanned by an AnsatzSpace (bi-homogeneous monomials with jet order <= N
// and u-polynomial coefficient degree <= K), and every solve is an exact
// rational echelon solve with free variables set to zero, so outputs are
// deterministic representatives of their gauge classes.

#include "cohomlab/sector.hpp"
#include "structures/structures.hpp"

#include <string>
#include <vector>

namespace deform {

using jetalg::Atom;
using jetalg::DiffPoly;
using jetalg::Rat;
using varcalc::LocalFunctional;

// Finite model of the (p, d) density space used for linear solving.
// Negative N or K request the defaults N = d, K = d + 2 (images under the
// second structure raise the u-degree by at most one per application, so the
// default slack absorbs them).
struct AnsatzSpace {
    int p = 1;
    int d = 0;
    int N = -1;
    int K = -1;
};

// The residual of an unsolvable system: residual = rhs - image of the best
// echelon-reducible part, a genuine functional; certificate holds its
// coordinates in the complement of the image (rows of the internal
// variational-coordinate space). residual == 0 iff the solve succeeded.
struct Obstruction {
    LocalFunctional residual;
    std::vector<std::pair<int, Rat>> certificate;
};

enum class SolveStatus {
    Solved,
    ObstructionNonzero, // residual stable under ansatz enlargement
    AnsatzTooSmall,     // residual changed when N, K were doubled
};

struct DeformStep {
    SolveStatus status = SolveStatus::ObstructionNonzero;
    LocalFunctional X; // gauge-fixed 1-vector solving [P1,[P2,X]] = W
    LocalFunctional Q; // the correction [P1, X]
    Obstruction obstruction;
    int retries = 0;
    AnsatzSpace used; // the ansatz of the final attempt
};

// Extends P2 + Q[0] + Q[1] + ... (corrections of standard degree 3, 5, ...)
// by the next correction Q_m, m = Q.size() + 1: verifies the defining
// equations of the given corrections ([P1,Q_k] = 0 and
// [P2,Q_k] = -1/2 sum_{i+j=k} [Q_i,Q_j]), builds W_m for the next order,
// asserts [P1,W_m] = [P2,W_m] = 0, and solves [P1,[P2,X_m]] = W_m over the
// ansatz (default degree 2m), returning Q_m = [P1,X_m]. Inconsistent systems
// trigger a bounded doubling retry; the outcome distinguishes a stable
// residual class from a truncation that was too small. Throws AlgebraError
// when the inputs violate the preconditions or leave the polynomial sector.
DeformStep solve_next_order(const structures::PoissonPair& pair,
    const std::vector<LocalFunctional>& Q, AnsatzSpace cfg = { 1, 0, -1, -1 });

// exp(ad_X) P = sum_k ad_X^k(P) / k!, truncated at standard degree
// valuation(P) + maxOrder. Requires valuation(X) >= 1 (a Miura generator
// close to the identity), so the series terminates within the truncation.
LocalFunctional miura_apply(const LocalFunctional& x, const LocalFunctional& p, int maxOrder);

struct TrivializeResult {
    bool ok = false;
    LocalFunctional X;
    std::string hint; // on failure: the truncation tried and a retry hint
};

// Solves Q = [P1, X] for a bivector cocycle Q ([P1,Q] = 0 is checked;
// Q and P1 must be bihomogeneous). No automatic retry: failure reports the
// truncation so the caller can enlarge the ansatz.
TrivializeResult trivialize(const LocalFunctional& q, const LocalFunctional& p1,
    AnsatzSpace cfg = { 1, 0, -1, -1 });

// Homotopy step: for scalar F with jet order <= N, N >= 1 and dF/du^N = 0,
// returns X (jet order <= N-1) with jet_order(F - D1 X) <= N-1,
// X = \int_0^{u^{N-1}} (dF/dth^N).
DiffPoly homotopy_L52(const DiffPoly& f, int n);

// Reduction to the form th*A + B: for scalar F with jet order <= N, N >= 1
// and jet_order(D1 D2 F) <= N+1, returns X with F - D1 X = th*A + B,
// jet_order(A) <= N, jet_order(B) <= N-1.
struct ThetaSplit {
    DiffPoly X, A, B;
};
ThetaSplit reduce_L53(const DiffPoly& f, int n);

// The Euler-type equation a0 f + sum_k a_k x_k df/dx_k = g over the
// polynomial ring in the weighted jet atoms x_k (all weights positive;
// the u-dependence and unweighted atoms ride along in the coefficient ring).
// Unique solution for a0 > 0; for a0 = 0 the part of g free of every x_k
// must vanish and the constant-free solution is returned.
DiffPoly euler_solve(const DiffPoly& g, const Rat& a0,
    const std::vector<std::pair<Atom, Rat>>& weights);

// Second-structure reduction: for scalar F = th*A + B with jet order <= N,
// N >= 1, dA/du^N of jet order <= N-1, dA/dth^N = 0 and jet_order(B) <= N-1,
// returns (X, Y) with jet_order(F - D2 X + D1 Y) <= N-1:
//   X = \int_0^{u^{N-1}} 2 dA/du^N,
//   Y = \int_0^{u^{N-1}} ( u dX/du^{N-1} - 1/2 th dX/dth^{N-1} ).
struct SecondReduction {
    DiffPoly X, Y;
};
SecondReduction reduce_L55(const DiffPoly& f, int n);

} // namespace deform
