#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "cohomlab/cohomlab.hpp"
#include "structures/structures.hpp"
#include "varcalc/varcalc.hpp"

using namespace cohomlab;
using namespace jetalg;

namespace {
bool is_zero_mat(const SparseMat& m)
{
    for (const auto& c : m.cols)
        if (!c.is_zero())
            return false;
    return true;
}
} // namespace

TEST_CASE("sparse exact linear algebra: rank, kernel, solve, residue")
{
    // columns: (1,2), (2,4), (1,0) in R^2
    SparseMat m;
    m.rows = 2;
    m.cols.push_back({ { { 0, Rat(1) }, { 1, Rat(2) } } });
    m.cols.push_back({ { { 0, Rat(2) }, { 1, Rat(4) } } });
    m.cols.push_back({ { { 0, Rat(1) } } });
    CHECK(rank(m) == 2);

    std::vector<SparseVec> ker = kernel_basis(m);
    REQUIRE(ker.size() == 1);
    CHECK(apply(m, ker[0]).is_zero());

    SparseVec b { { { 0, Rat(3) }, { 1, Rat(6) } } };
    auto sol = solve(m, b);
    REQUIRE(sol.has_value());
    CHECK(apply(m, *sol) == b);

    SparseVec e1 { { { 1, Rat(1) } } }; // (0,1) = ((1,2) - (1,0)) / 2
    auto inSpan = solve(m, e1);
    REQUIRE(inSpan.has_value());
    CHECK(apply(m, *inSpan) == e1);

    SparseMat tall; // span{(1,0,0),(0,1,0)} misses (0,0,1)
    tall.rows = 3;
    tall.cols.push_back(sv_unit(0));
    tall.cols.push_back(sv_unit(1));
    CHECK(!solve(tall, sv_unit(2)).has_value());

    // reduce_residual decomposes b = m*solution + residue in both regimes.
    Residue r1 = reduce_residual(m, b);
    CHECK(r1.residue.is_zero());
    CHECK(apply(m, r1.solution) == b);
    SparseVec off { { { 0, Rat(1) }, { 1, Rat(1) }, { 2, Rat(5) } } };
    Residue r2 = reduce_residual(tall, off);
    CHECK(!r2.residue.is_zero());
    CHECK(sv_add_scaled(apply(tall, r2.solution), Rat(1), r2.residue) == off);

    CHECK(column_space_basis(m).size() == 2);
    SparseMat w; // col(w) = span{(1,1)} meets col(m) = R^2 in a line
    w.rows = 2;
    w.cols.push_back({ { { 0, Rat(1) }, { 1, Rat(1) } } });
    CHECK(meet_dim(m, w) == 1);
    std::vector<SparseVec> meet = meet_basis(m, w);
    REQUIRE(meet.size() == 1);
    REQUIRE(meet[0].e.size() == 2);
    CHECK(meet[0].e[0].second == meet[0].e[1].second);
}

TEST_CASE("sector bases enumerate the documented small sectors")
{
    CHECK(SectorBasis(GradedSector { 3, 3, 2, 0 }).dim() == 1);
    SectorBasis b(GradedSector { 0, 0, 0, 2 });
    REQUIRE(b.dim() == 3);
    CHECK(b.text(0) == "1");
    CHECK(b.text(1) == "u");
    CHECK(b.text(2) == "u^2");
    SectorBasis th(GradedSector { 1, 0, 0, 0 });
    REQUIRE(th.dim() == 1);
    CHECK(th.text(0) == "th");
}

TEST_CASE("apply_d1/apply_d2 agree with the variational derivation")
{
    structures::PoissonPair pair = structures::dkdv_pair();
    for (int p = 0; p <= 3; ++p)
        for (int d = 0; d <= 4; ++d) {
            SectorBasis b(GradedSector { p, d, 4, 3 });
            for (int i = 0; i < b.dim(); ++i) {
                DiffPoly f = b.poly(i);
                CHECK(apply_d1(f) == varcalc::dp_apply(pair.P1, f));
                CHECK(apply_d2(f) == varcalc::dp_apply(pair.P2, f));
            }
        }
}

TEST_CASE("matrix identities: D1^2 = D2^2 = D1 D2 + D2 D1 = 0")
{
    for (int p = 0; p <= 2; ++p)
        for (int d = 0; d <= 4; ++d) {
            GradedSector s { p, d, 4, 3 };
            SectorBasis sb(s);
            SectorBasis b1(image_sector(Diff::D1, s));
            SectorBasis b2(image_sector(Diff::D2, s));
            SectorBasis topB(GradedSector { p + 2, d + 2, s.N + 2, s.K + 2 });
            SparseMat d1 = operator_matrix_into(Diff::D1, sb, b1).m;
            SparseMat d2 = operator_matrix_into(Diff::D2, sb, b2).m;
            SparseMat d1_after_d2 = operator_matrix_into(Diff::D1, b2, topB).m;
            SparseMat d2_after_d1 = operator_matrix_into(Diff::D2, b1, topB).m;
            SparseMat d1_after_d1 = operator_matrix_into(Diff::D1, b1, topB).m;
            SparseMat d2_after_d2 = operator_matrix_into(Diff::D2, b2, topB).m;
            CHECK(is_zero_mat(matmul(d1_after_d1, d1)));
            CHECK(is_zero_mat(matmul(d2_after_d2, d2)));
            SparseMat anti = hcat(matmul(d1_after_d2, d2), matmul(d2_after_d1, d1));
            int n = d1.col_count();
            bool anticommute = true;
            for (int j = 0; j < n; ++j)
                if (!sv_add_scaled(anti.cols[j], Rat(1), anti.cols[j + n]).is_zero())
                    anticommute = false;
            CHECK(anticommute);
        }
}

TEST_CASE("H(A, D1) pattern: binom(1, p) at d = 0, zero for d = 1..4")
{
    CHECK(h_dimension(GradedSector { 0, 0, 2, 4 }) == 1);
    CHECK(h_dimension(GradedSector { 1, 0, 2, 4 }) == 1);
    CHECK(h_dimension(GradedSector { 2, 0, 2, 4 }) == 0);
    CHECK(h_dimension(GradedSector { 3, 0, 2, 4 }) == 0);
    CHECK(h_dimension(GradedSector { 4, 0, 2, 4 }) == 0);
    for (int d = 1; d <= 4; ++d)
        for (int p = 0; p <= 4; ++p)
            CHECK(h_dimension(GradedSector { p, d, d + 2, d + 2 }) == 0);
}

TEST_CASE("BH^2 pattern: K+1 at d = 1, zero at d = 0 and d = 2..5")
{
    CHECK(bh_dimension(GradedSector { 2, 0, 2, 4 }) == 0);
    for (int K = 2; K <= 5; ++K)
        CHECK(bh_dimension(GradedSector { 2, 1, 3, K }) == K + 1);
    for (int d : { 2, 3, 4, 5 })
        CHECK(bh_dimension(GradedSector { 2, d, d + 3, d + 3 }) == 0);
}

TEST_CASE("BH^3 pattern: K+1 at d = 3, zero at d = 0..2 and d = 4..7")
{
    for (int d : { 0, 1, 2 })
        CHECK(bh_dimension(GradedSector { 3, d, d + 3, d + 3 }) == 0);
    for (int K = 2; K <= 4; ++K)
        CHECK(bh_dimension(GradedSector { 3, 3, 5, K }) == K + 1);
    for (int d : { 4, 5, 6, 7 })
        CHECK(bh_dimension(GradedSector { 3, d, d + 3, d + 3 }) == 0);
}

TEST_CASE("BH^4 pattern: zero at d = 6 and d = 7")
{
    for (int d : { 6, 7 })
        CHECK(bh_dimension(GradedSector { 4, d, d + 3, d + 3 }) == 0);
}

TEST_CASE("lambda presentation: matches at zero sectors, +L inflation else")
{
    CHECK(lambda_cohomology(GradedSector { 3, 4, 6, 6, 6 }) == 0);
    CHECK(lambda_cohomology(GradedSector { 2, 3, 6, 6, 5 }) == 0);
    // At a nonzero sector the finite K-window lets each of the L lambda-bands
    // of top-degree classes escape the u-degree cut: value inflates by +L.
    for (int K = 2; K <= 4; ++K)
        CHECK(lambda_cohomology(GradedSector { 3, 3, 5, K, 5 }) == K + 1 + 5);
    CHECK(iso_crosscheck(2, 2));
    CHECK(iso_crosscheck(2, 3));
    CHECK(iso_crosscheck(2, 4));
    CHECK(iso_crosscheck(3, 4));
}

TEST_CASE("functional BH^2 pattern: K+1 at d = 3, zero at d = 2, 4, 5")
{
    CHECK(functional_bh_dimension(GradedSector { 2, 2, 5, 5, -1 }) == 0);
    for (int K = 2; K <= 4; ++K)
        CHECK(functional_bh_dimension(GradedSector { 2, 3, 6, K, -1 }) == K + 1);
    CHECK(functional_bh_dimension(GradedSector { 2, 4, 6, 6, -1 }) == 0);
    CHECK(functional_bh_dimension(GradedSector { 2, 5, 7, 7, -1 }) == 0);
}

TEST_CASE("long exact sequence segment at p = 2")
{
    for (int d : { 2, 3, 4 }) {
        ExactnessReport rep = exactness_scan(GradedSector { 2, d, d + 3, d + 3, -1 });
        if (d == 3) {
            // Nonzero sector: the connecting map is injective and the G3
            // defect equals the presentation-window excess of the next group.
            CHECK(rep.dimG1 == 0);
            CHECK(rep.dimG2 == d + 3 + 1);
            CHECK(rep.defectG2 == 0);
            CHECK(rep.rank2 == rep.dimG2);
            CHECK(rep.dimG3 == (d + 3) + 2 + 4 + 1);
            CHECK(rep.rank3 == 0);
            CHECK(rep.defectG3 == rep.dimG3 - rep.rank2);
        } else {
            CHECK(rep.exact());
            CHECK(rep.dimG1 == 0);
            CHECK(rep.dimG2 == 0);
            CHECK(rep.dimG3 == 0);
        }
    }
    ExactnessReport triv = exactness_scan(GradedSector { 5, 2, 4, 3, -1 });
    CHECK(triv.dimG1 == 0);
    CHECK(triv.dimG2 == 0);
    CHECK(triv.exact());
}

TEST_CASE("stabilization scans settle and report the witness truncation")
{
    ScanResult r = stabilization_scan(
        [](int n, int k) { return bh_dimension(GradedSector { 3, 5, n, k, -1 }); },
        ScanSchedule { 5, 5, true, true, 4 });
    CHECK(r.stabilized);
    CHECK(r.value == 0);

    ScanResult h = stabilization_scan(
        [](int n, int k) { return h_dimension(GradedSector { 1, 0, n, k, -1 }); },
        ScanSchedule { 0, 0, true, true, 6 });
    CHECK(h.stabilized);
    CHECK(h.value == 1);

    ScanResult capped = stabilization_scan([](int, int) { return 7; },
        ScanSchedule { 0, 0, true, true, 1 });
    CHECK(!capped.stabilized);
    CHECK(capped.value == 7);
}
