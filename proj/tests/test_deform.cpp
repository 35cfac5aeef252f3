#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cohomlab/sector.hpp"
#include "deform/deform.hpp"
#include "jetalg/print.hpp"

#include <algorithm>
#include <random>

using namespace deform;
using namespace jetalg;
using structures::PoissonPair;
using varcalc::LocalFunctional;
using varcalc::functional_equal;
using varcalc::functional_is_zero;
using varcalc::schouten;

namespace {
DiffPoly at1(Atom a) { return DiffPoly::atom(1, a); }
const Atom u0 = atom_even(1, 0), u1a = atom_even(1, 1), u2a = atom_even(1, 2),
           u3a = atom_even(1, 3);
const Atom th = atom_odd(1, 0), th1a = atom_odd(1, 1), th2a = atom_odd(1, 2),
           th3a = atom_odd(1, 3), th4a = atom_odd(1, 4);

// Random scalar polynomial with jet order <= n; the top-order even (odd)
// atom can be excluded so lemma preconditions hold by construction.
DiffPoly random_poly(std::mt19937_64& rng, int nmax, bool allowUN, bool allowThN)
{
    DiffPoly acc(1);
    std::uniform_int_distribution<int> coin(0, 1), ord(0, nmax), cnt(1, 3),
        upow(0, 2), cdist(-4, 4);
    int terms = cnt(rng) + 1;
    for (int t = 0; t < terms; ++t) {
        Monomial m;
        int ne = cnt(rng) - 1;
        for (int k = 0; k < ne; ++k) {
            int o = ord(rng);
            if (o == 0 || (!allowUN && o == nmax))
                continue;
            bool found = false;
            for (auto& [b, e] : m.even)
                if (b == atom_even(1, o)) {
                    e += 1;
                    found = true;
                }
            if (!found)
                m.even.emplace_back(atom_even(1, o), 1);
        }
        std::sort(m.even.begin(), m.even.end());
        if (coin(rng)) {
            int o = ord(rng);
            if (!(o == nmax && !allowThN))
                m.odd.push_back(atom_odd(1, o));
        }
        long c = cdist(rng);
        if (c == 0)
            c = 1;
        Coefficient coef = Coefficient(rat(c))
            * Coefficient(sp_pow(ScalarPoly::variable(uvar(1)),
                static_cast<unsigned>(upow(rng))));
        DiffPoly term(1);
        term.add_term(m, coef);
        acc = acc + term;
    }
    return acc;
}
} // namespace

TEST_CASE("solve_next_order: trivial and constant seeds")
{
    PoissonPair dkdv = structures::dkdv_pair();
    DeformStep s0 = solve_next_order(dkdv, {});
    CHECK(s0.status == SolveStatus::Solved);
    CHECK(s0.Q.density.is_zero());

    // Constant central invariant: the series stops after eps^2 (KdV).
    LocalFunctional q1c = structures::infinitesimal_from_central_invariant(
        Coefficient(rat(1, 24)));
    DeformStep s1 = solve_next_order(dkdv, { q1c });
    CHECK(s1.status == SolveStatus::Solved);
    CHECK(s1.Q.density.is_zero());
}

TEST_CASE("solve_next_order: seed c = u, orders eps^4 and eps^6")
{
    PoissonPair dkdv = structures::dkdv_pair();
    Coefficient cu = Coefficient::variable(uvar(1));
    LocalFunctional q1 = structures::infinitesimal_from_central_invariant(cu);

    DeformStep s2 = solve_next_order(dkdv, { q1 });
    REQUIRE(s2.status == SolveStatus::Solved);
    CHECK(s2.retries == 0);
    CHECK(s2.used.N == 4);
    CHECK(s2.used.K == 6);
    DiffPoly q2expected = mul(at1(u2a), mul(at1(th1a), at1(th2a))) * rat(-27, 2)
        + mul(at1(u1a), mul(at1(th1a), at1(th3a))) * rat(-27, 2)
        + mul(at1(th1a), at1(th4a)) * Coefficient::variable(uvar(1)) * rat(-9, 2);
    CHECK(functional_equal(s2.Q, LocalFunctional(q2expected)));

    // Re-verify the defining equations with independent brackets.
    CHECK(functional_is_zero(schouten(dkdv.P1, s2.Q)));
    DiffPoly rhs = schouten(dkdv.P2, s2.Q).density + schouten(q1, q1).density * rat(1, 2);
    CHECK(functional_is_zero(LocalFunctional(rhs)));

    // The A_{2,k} table stored in deformed_pair solves the same equations and
    // differs from the solver's representative by a [P1, -] coboundary.
    structures::DeformationSeries lor = structures::deformed_pair(cu, 4);
    LocalFunctional stored = lor.corrections.at(4);
    CHECK(functional_is_zero(schouten(dkdv.P1, stored)));
    DiffPoly rhs2 = schouten(dkdv.P2, stored).density + schouten(q1, q1).density * rat(1, 2);
    CHECK(functional_is_zero(LocalFunctional(rhs2)));
    LocalFunctional diff(stored.density - s2.Q.density);
    if (!diff.density.is_zero()) {
        TrivializeResult tr = trivialize(diff, dkdv.P1, AnsatzSpace { 1, 0, 5, 8 });
        REQUIRE(tr.ok);
        CHECK(functional_equal(schouten(dkdv.P1, tr.X), diff));
    }

    DeformStep s3 = solve_next_order(dkdv, { q1, s2.Q });
    REQUIRE(s3.status == SolveStatus::Solved);
    CHECK(functional_is_zero(schouten(dkdv.P1, s3.Q)));
    // W_3 = [Q1, Q2]: the symmetric sum (1/2)([Q1,Q2] + [Q2,Q1]) collapses.
    DiffPoly rhs3 = schouten(dkdv.P2, s3.Q).density + schouten(q1, s2.Q).density;
    CHECK(functional_is_zero(LocalFunctional(rhs3)));
}

TEST_CASE("solve_next_order: seed c = u^2")
{
    PoissonPair dkdv = structures::dkdv_pair();
    Coefficient cu2 = Coefficient(sp_pow(ScalarPoly::variable(uvar(1)), 2));
    LocalFunctional q1 = structures::infinitesimal_from_central_invariant(cu2);
    DeformStep s2 = solve_next_order(dkdv, { q1 });
    REQUIRE(s2.status == SolveStatus::Solved);
    CHECK(functional_is_zero(schouten(dkdv.P1, s2.Q)));
    DiffPoly rhs = schouten(dkdv.P2, s2.Q).density + schouten(q1, q1).density * rat(1, 2);
    CHECK(functional_is_zero(LocalFunctional(rhs)));
}

TEST_CASE("miura_apply: identity, CH shift, round trip, Poisson transport")
{
    PoissonPair dkdv = structures::dkdv_pair();
    LocalFunctional zero { DiffPoly(1) };
    LocalFunctional p2 = dkdv.P2;
    CHECK(functional_equal(miura_apply(zero, p2, 4), p2));

    // exp(ad_X) with X = (1/16) int u2 th sends P1 to the CH first structure.
    LocalFunctional x(mul(at1(u2a), at1(th)) * rat(1, 16));
    CHECK(functional_equal(miura_apply(x, dkdv.P1, 2), structures::ch_pair().P1));

    LocalFunctional xminus(x.density * rat(-1));
    LocalFunctional round = miura_apply(xminus, miura_apply(x, p2, 4), 4);
    CHECK(functional_equal(round, LocalFunctional(standard_truncate(p2.density, 5))));

    // Poisson property is preserved through the truncation order.
    PoissonPair kdv = structures::kdv_pair();
    LocalFunctional moved = miura_apply(x, kdv.P2, 4);
    varcalc::Verdict v = varcalc::is_poisson(moved);
    CHECK(functional_is_zero(LocalFunctional(standard_truncate(v.residual.density, 6))));

    // A generator of valuation 0 is not close to the identity: rejected.
    CHECK_THROWS_AS(miura_apply(LocalFunctional(mul(at1(u0), at1(th))), p2, 2),
        AlgebraError);
}

TEST_CASE("trivialize: exact cocycles, the KdV tail, and the failure hint")
{
    PoissonPair dkdv = structures::dkdv_pair();
    LocalFunctional x0(mul(at1(u2a), at1(th)));
    LocalFunctional q = schouten(dkdv.P1, x0);
    TrivializeResult tr = trivialize(q, dkdv.P1);
    REQUIRE(tr.ok);
    CHECK(functional_equal(schouten(dkdv.P1, tr.X), q));

    // (1/16) int th th3 = [P1, -(1/16) int u2 th].
    LocalFunctional qkdv(mul(at1(th), at1(th3a)) * rat(1, 16));
    TrivializeResult tr2 = trivialize(qkdv, dkdv.P1);
    REQUIRE(tr2.ok);
    CHECK(functional_equal(schouten(dkdv.P1, tr2.X), qkdv));
    CHECK(functional_equal(tr2.X, LocalFunctional(mul(at1(u2a), at1(th)) * rat(-1, 16))));

    TrivializeResult tr3 = trivialize(LocalFunctional(DiffPoly(1)), dkdv.P1);
    CHECK(tr3.ok);
    CHECK(tr3.X.density.is_zero());

    // Even int th th1 has a [P1, -] preimage at this degree.
    LocalFunctional cocycle(mul(at1(th), at1(th1a)));
    TrivializeResult tr4 = trivialize(cocycle, dkdv.P1);
    REQUIRE(tr4.ok);
    CHECK(functional_equal(schouten(dkdv.P1, tr4.X), cocycle));

    // A window too small to hold the preimage fails with a retry hint.
    TrivializeResult tr5 = trivialize(qkdv, dkdv.P1, AnsatzSpace { 1, 0, 0, 0 });
    CHECK(!tr5.ok);
    CHECK(!tr5.hint.empty());
}

TEST_CASE("homotopy_L52 strips the top jet order")
{
    DiffPoly a = mul(at1(u1a), at1(u1a)) + at1(u0) * rat(3) + DiffPoly::constant(1, rat(2));
    DiffPoly f = mul(at1(th2a), a);
    DiffPoly x = homotopy_L52(f, 2);
    CHECK(jet_order(x) <= 1);
    CHECK(jet_order(f - cohomlab::apply_d1(x)) <= 1);

    DiffPoly low = mul(at1(th1a), at1(u1a)) + at1(u0);
    CHECK(homotopy_L52(low, 2).is_zero());

    // dF/du^N != 0 violates the precondition.
    CHECK_THROWS_AS(homotopy_L52(mul(at1(u2a), at1(th)), 2), AlgebraError);
}

TEST_CASE("reduce_L53 reaches th*A + B with B free of theta and low order")
{
    std::mt19937_64 rng(20260814);
    const DiffPoly theta = at1(th);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 2);
        DiffPoly a = random_poly(rng, n, true, true);
        DiffPoly b1 = random_poly(rng, n, false, true);
        DiffPoly f = mul(theta, a) + b1;
        if (jet_order(cohomlab::apply_d1(cohomlab::apply_d2(f))) > n + 1)
            continue;
        ThetaSplit r = reduce_L53(f, n);
        CHECK(jet_order(r.X) <= n - 1);
        CHECK(jet_order(r.B) <= n - 1);
        CHECK(f - cohomlab::apply_d1(r.X) == mul(theta, r.A) + r.B);
        CHECK(partial(r.B, atom_odd(1, 0)).is_zero());
    }
    CHECK_THROWS_AS(reduce_L53(mul(at1(u2a), at1(u2a)), 2), AlgebraError);
}

TEST_CASE("euler_solve round trips on random weighted systems")
{
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> wden(1, 4), wnum(1, 5);
    for (int trial = 0; trial < 100; ++trial) {
        DiffPoly g = random_poly(rng, 3, true, true);
        std::vector<std::pair<Atom, Rat>> weights = {
            { u1a, rat(wnum(rng), wden(rng)) },
            { u2a, rat(wnum(rng), wden(rng)) },
            { u3a, rat(wnum(rng), wden(rng)) },
        };
        Rat a0 = rat(wnum(rng), wden(rng));
        DiffPoly f = euler_solve(g, a0, weights);
        DiffPoly lhs = f * a0;
        for (const auto& [atom, wt] : weights)
            lhs = lhs + mul(at1(atom), partial(f, atom)) * wt;
        CHECK(lhs == g);
    }
    CHECK(euler_solve(DiffPoly(1), rat(3), {}).is_zero());

    // a0 = 0 works when every term of g carries a weighted atom ...
    DiffPoly g0 = mul(at1(u1a), at1(th)) * rat(5);
    DiffPoly f0 = euler_solve(g0, rat(0), { { u1a, rat(2) } });
    CHECK(mul(at1(u1a), partial(f0, u1a)) * rat(2) == g0);
    // ... and is rejected when the weight-0 part of g is nonzero.
    CHECK_THROWS_AS(euler_solve(DiffPoly::constant(1, rat(1)), rat(0), { { u1a, rat(1) } }),
        AlgebraError);
}

TEST_CASE("reduce_L55 lowers the jet order modulo im D2 + im D1")
{
    std::mt19937_64 rng(4242);
    const DiffPoly theta = at1(th);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 1 + static_cast<int>(rng() % 3);
        DiffPoly h = random_poly(rng, n - 1, true, true);
        DiffPoly a0poly = random_poly(rng, n - 1, true, true);
        DiffPoly a = mul(at1(atom_even(1, n)), h) + a0poly;
        DiffPoly b = random_poly(rng, n - 1, true, true);
        DiffPoly f = mul(theta, a) + b;
        SecondReduction r = reduce_L55(f, n);
        DiffPoly reduced = f - cohomlab::apply_d2(r.X) + cohomlab::apply_d1(r.Y);
        CHECK(jet_order(reduced) <= n - 1);
        CHECK(jet_order(r.X) <= n - 1);
        CHECK(jet_order(r.Y) <= n - 1);
    }
    SecondReduction rz = reduce_L55(mul(theta, at1(u1a)) + at1(u0), 2);
    CHECK(rz.X.is_zero());
    CHECK(rz.Y.is_zero());
    // A depending quadratically on u^N falls outside the lemma's shape.
    CHECK_THROWS_AS(reduce_L55(mul(theta, mul(at1(u2a), at1(u2a))), 2), AlgebraError);
}
