#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "structures/structures.hpp"
#include "support/random_inputs.hpp"
#include "varcalc/varcalc.hpp"

#include <random>

using namespace jetalg;
using namespace varcalc;

namespace {
DiffPoly at1(Atom a) { return DiffPoly::atom(1, a); }
const Atom u0 = atom_even(1, 0), u1a = atom_even(1, 1), u2a = atom_even(1, 2),
           u3a = atom_even(1, 3);
const Atom th = atom_odd(1, 0), th1a = atom_odd(1, 1), th2a = atom_odd(1, 2),
           th3a = atom_odd(1, 3);

Rat sign_pow(int e) { return e % 2 == 0 ? Rat(1) : Rat(-1); }
} // namespace

TEST_CASE("variational derivatives kill total derivatives")
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 30; ++i) {
        DiffPoly f = testsupport::random_bihomogeneous(rng, 1 + (i % 2), 2 + (i % 3));
        DiffPoly df = total_derivative(f);
        CHECK(var_deriv_even(df, 1).is_zero());
        CHECK(var_deriv_odd(df, 1).is_zero());
    }
}

TEST_CASE("functional zero: all variational derivatives plus constant term")
{
    LocalFunctional zero(total_derivative(mul(at1(u1a), at1(th))));
    CHECK(functional_is_zero(zero));
    CHECK(!functional_is_zero(LocalFunctional(DiffPoly::constant(1, rat(1)))));
    CHECK(functional_equal(LocalFunctional(mul(at1(th), at1(th2a))),
        LocalFunctional(-mul(at1(th1a), at1(th1a))
            + mul(at1(th), at1(th2a)))));
    // int th th2 = -int th1 th1 + d/dx(th th1) = 0 + exact: th1 th1 = 0, so
    // int th th2 equals the derivative of th th1 and is the zero functional
    CHECK(functional_is_zero(LocalFunctional(mul(at1(th), at1(th2a)))));
}

TEST_CASE("worked example: bracket, D_P, D_Q, and the homomorphism")
{
    LocalFunctional P(mul(mul(at1(u0), at1(u1a)), at1(th)));
    LocalFunctional Q(mul(at1(u2a), mul(at1(th), at1(th1a))));
    CHECK(P.super_degree == 1);
    CHECK(Q.super_degree == 2);

    LocalFunctional br = schouten(P, Q);
    DiffPoly display = mul(mul(at1(u0), at1(u1a)), mul(at1(th1a), at1(th2a)))
        + mul(mul(at1(u0), at1(u1a)), mul(at1(th), at1(th3a)))
        - mul(mul(at1(u0), at1(u3a)), mul(at1(th), at1(th1a)));
    CHECK(functional_equal(br, LocalFunctional(display)));

    // D_P on generators: D_P(u^s) = d^s(u u1), D_P(th^s) = d^s(u th1)
    DiffPoly uu1 = mul(at1(u0), at1(u1a));
    DiffPoly uth1 = mul(at1(u0), at1(th1a));
    CHECK(dp_apply(P, at1(u0)) == uu1);
    CHECK(dp_apply(P, at1(u1a)) == total_derivative(uu1));
    CHECK(dp_apply(P, at1(th)) == uth1);
    CHECK(dp_apply(P, at1(th2a)) == total_derivative(uth1, 2));

    // D_Q on generators: D_Q(u^s) = d^s(2 u2 th1 + u3 th),
    //                    D_Q(th^s) = d^{s+2}(th th1)
    DiffPoly evenPart = mul(at1(u2a), at1(th1a)) * rat(2)
        + mul(at1(u3a), at1(th));
    DiffPoly thth1 = mul(at1(th), at1(th1a));
    CHECK(dp_apply(Q, at1(u0)) == evenPart);
    CHECK(dp_apply(Q, at1(u1a)) == total_derivative(evenPart));
    CHECK(dp_apply(Q, at1(th)) == total_derivative(thth1, 2));
    CHECK(dp_apply(Q, at1(th1a)) == total_derivative(thth1, 3));

    // Theorem: [P,Q] = int D_P(Q) and the homomorphism identity
    CHECK(functional_equal(br, LocalFunctional(dp_apply(P, Q.density))));
    CHECK(d_homomorphism_check(P, Q));
}

TEST_CASE("graded symmetry on random homogeneous inputs")
{
    std::mt19937_64 rng(22);
    const int pd[][2] = { { 0, 2 }, { 1, 2 }, { 1, 3 }, { 2, 2 }, { 2, 3 }, { 3, 4 } };
    for (int i = 0; i < 60; ++i) {
        auto [p, dp_] = pd[i % 6];
        auto [q, dq] = pd[(i + 2) % 6];
        LocalFunctional P = testsupport::random_functional(rng, p, dp_);
        LocalFunctional Q = testsupport::random_functional(rng, q, dq);
        LocalFunctional lhs = schouten(P, Q);
        LocalFunctional rhs(schouten(Q, P).density * sign_pow(p * q));
        CHECK(functional_equal(lhs, rhs));
    }
}

TEST_CASE("graded Jacobi identity on random homogeneous inputs")
{
    std::mt19937_64 rng(23);
    const int pd[][2] = { { 1, 2 }, { 2, 2 }, { 2, 3 }, { 0, 2 }, { 3, 4 } };
    for (int i = 0; i < 50; ++i) {
        auto [p, dp_] = pd[i % 5];
        auto [q, dq] = pd[(i + 1) % 5];
        auto [r, dr] = pd[(i + 3) % 5];
        LocalFunctional P = testsupport::random_functional(rng, p, dp_, 1, 2);
        LocalFunctional Q = testsupport::random_functional(rng, q, dq, 1, 2);
        LocalFunctional R = testsupport::random_functional(rng, r, dr, 1, 2);
        DiffPoly acc = schouten(schouten(P, Q), R).density * sign_pow(p * r)
            + schouten(schouten(Q, R), P).density * sign_pow(q * p)
            + schouten(schouten(R, P), Q).density * sign_pow(r * q);
        CHECK(functional_is_zero(LocalFunctional(acc)));
    }
}

TEST_CASE("bracket equals the integral of the derivation")
{
    std::mt19937_64 rng(24);
    const int pd[][2] = { { 1, 2 }, { 2, 2 }, { 2, 3 }, { 3, 4 }, { 0, 3 } };
    for (int i = 0; i < 50; ++i) {
        auto [p, dp_] = pd[i % 5];
        auto [q, dq] = pd[(i + 2) % 5];
        LocalFunctional P = testsupport::random_functional(rng, p, dp_);
        LocalFunctional Q = testsupport::random_functional(rng, q, dq);
        CHECK(functional_equal(schouten(P, Q),
            LocalFunctional(dp_apply(P, Q.density))));
    }
}

TEST_CASE("derivation homomorphism on random inputs")
{
    std::mt19937_64 rng(25);
    const int pd[][2] = { { 1, 2 }, { 2, 2 }, { 2, 3 } };
    for (int i = 0; i < 12; ++i) {
        auto [p, dp_] = pd[i % 3];
        auto [q, dq] = pd[(i + 1) % 3];
        LocalFunctional P = testsupport::random_functional(rng, p, dp_, 1, 2);
        LocalFunctional Q = testsupport::random_functional(rng, q, dq, 1, 2);
        CHECK(d_homomorphism_check(P, Q));
    }
}

TEST_CASE("poisson verdicts on the classical bivectors")
{
    structures::PoissonPair dkdv = structures::dkdv_pair();
    CHECK(is_poisson(dkdv.P1).ok);
    CHECK(is_poisson(dkdv.P2).ok);
    CHECK(is_compatible(dkdv.P1, dkdv.P2).ok);
    // a bivector that fails Jacobi, with a nonzero residual witness
    LocalFunctional bad(mul(at1(u1a), mul(at1(th), at1(th1a))));
    varcalc::Verdict v = is_poisson(bad);
    CHECK(!v.ok);
    CHECK(!functional_is_zero(v.residual));
}

TEST_CASE("normalize and reassemble are mutually inverse")
{
    structures::PoissonPair kdv = structures::kdv_pair();
    for (const LocalFunctional& p : { kdv.P1, kdv.P2 }) {
        HamiltonianOperator op = normalize_bivector(p);
        CHECK(operator_skew_check(op));
        CHECK(functional_equal(reassemble(op), p));
    }
    // the KdV second operator is u d + 1/2 u1 + 1/8 d^3
    HamiltonianOperator op = normalize_bivector(kdv.P2);
    const std::vector<DiffPoly>& e = op.entry(1, 1);
    REQUIRE(e.size() == 4);
    CHECK(e[0] == at1(u1a) * rat(1, 2));
    CHECK(e[1] == at1(u0));
    CHECK(e[2].is_zero());
    CHECK(e[3] == DiffPoly::constant(1, rat(1, 8)));
}

TEST_CASE("hamiltonian flow and poisson bracket conventions")
{
    structures::PoissonPair dkdv = structures::dkdv_pair();
    // X = -[P,H]; for P2 = 1/2 int u th th1, H = int u^2/2: u_t = d/dx(u^2/2)+...
    LocalFunctional H(mul(at1(u0), at1(u0)) * rat(1, 2));
    LocalFunctional x = hamiltonian_flow(dkdv.P2, H);
    std::vector<DiffPoly> comps = flow_components(x);
    REQUIRE(comps.size() == 1);
    // operator u d + 1/2 u1 applied to delta H = u gives (3/2) u u1
    CHECK(comps[0] == mul(at1(u0), at1(u1a)) * rat(3, 2));

    // {F,G}_P = -[F,[P,G]] agrees with int(dF . X_G)
    LocalFunctional F(dp_pow(at1(u0), 3));
    LocalFunctional pb = poisson_bracket(dkdv.P2, F, H);
    LocalFunctional direct(mul(var_deriv_even(F.density, 1), comps[0]));
    CHECK(functional_equal(pb, direct));
    // antisymmetry of the Poisson bracket
    LocalFunctional ba = poisson_bracket(dkdv.P2, H, F);
    CHECK(functional_is_zero(LocalFunctional(pb.density + ba.density)));
}

TEST_CASE("operator application matches the flow")
{
    structures::PoissonPair kdv = structures::kdv_pair();
    HamiltonianOperator op = normalize_bivector(kdv.P2);
    LocalFunctional H(dp_pow(at1(u0), 2) * rat(1, 2));
    std::vector<DiffPoly> viaOp = operator_apply(op, { var_deriv_even(H.density, 1) });
    std::vector<DiffPoly> viaFlow = flow_components(hamiltonian_flow(kdv.P2, H));
    REQUIRE(viaOp.size() == 1);
    CHECK(viaOp[0] == viaFlow[0]);
}

TEST_CASE("delta-notation rendering of the fixtures")
{
    structures::PoissonPair dkdv = structures::dkdv_pair();
    CHECK(render_delta_notation(dkdv.P1) == "{u(x), u(y)} = d'(x-y)");
    CHECK(render_delta_notation(dkdv.P2)
        == "{u(x), u(y)} = u*d'(x-y) + 1/2*u1*d(x-y)");
    structures::PoissonPair kdv = structures::kdv_pair();
    CHECK(render_delta_notation(kdv.P2)
        == "{u(x), u(y)} = 1/8*d^(3)(x-y) + u*d'(x-y) + 1/2*u1*d(x-y)");
}
