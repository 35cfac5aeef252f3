#include "cohomlab/cohomlab.hpp"

#include "jetalg/errors.hpp"

#include <algorithm>

namespace cohomlab {

namespace {

// dim(span(cols a) ∩ span(cols b)); both lists live in a common row space.
int span_meet_dim(const std::vector<SparseVec>& a, const std::vector<SparseVec>& b, int rows)
{
    return meet_dim(from_columns(rows, a), from_columns(rows, b));
}

int quotient_dim(const std::vector<SparseVec>& cocycles, const std::vector<SparseVec>& boundaries, int rows)
{
    if (cocycles.empty())
        return 0;
    return static_cast<int>(cocycles.size()) - span_meet_dim(cocycles, boundaries, rows);
}

OperatorMatrix matrix_into(Diff which, const GradedSector& src, const SectorBasis& amb)
{
    SectorBasis sb(src);
    return operator_matrix_into(which, sb, amb);
}

// Rewrites vectors expressed in amb coordinates (supported on sub's rows)
// into sub coordinates.
std::vector<SparseVec> to_sub_coordinates(std::vector<SparseVec> vecs, const SectorBasis& sub,
    const SectorBasis& amb)
{
    std::vector<int> rowMap(static_cast<std::size_t>(amb.dim()), -1);
    for (int j = 0; j < sub.dim(); ++j)
        rowMap[static_cast<std::size_t>(amb.index_of(sub.at(j)))] = j;
    for (SparseVec& v : vecs)
        v = sv_reindex(v, rowMap);
    return vecs;
}

// Boundaries im(D | src) ∩ span(sub), as vectors in sub coordinates.
std::vector<SparseVec> boundaries_in(Diff which, const GradedSector& src, const SectorBasis& sub)
{
    GradedSector ambSec = image_sector(which, src);
    ambSec.N = std::max(ambSec.N, sub.sector().N);
    ambSec.K = std::max(ambSec.K, sub.sector().K);
    ambSec.L = std::max(ambSec.L, sub.sector().L);
    SectorBasis amb(ambSec);
    OperatorMatrix m = matrix_into(which, src, amb);
    SparseMat w = inclusion_matrix(sub, amb);
    return to_sub_coordinates(meet_basis(m.m, w), sub, amb);
}

// Kernel of the stacked pair (D1, D2) on a sector: simultaneous cocycles.
std::vector<SparseVec> bh_cocycles(const SectorBasis& basis)
{
    OperatorMatrix m1 = operator_matrix(Diff::D1, basis.sector());
    OperatorMatrix m2 = operator_matrix(Diff::D2, basis.sector());
    SparseMat stacked;
    stacked.rows = m1.m.rows + m2.m.rows;
    stacked.cols.resize(static_cast<std::size_t>(basis.dim()));
    for (int j = 0; j < basis.dim(); ++j) {
        SparseVec col = m1.m.cols[static_cast<std::size_t>(j)];
        for (const auto& [i, c] : m2.m.cols[static_cast<std::size_t>(j)].e)
            col.e.emplace_back(i + m1.m.rows, c);
        stacked.cols[static_cast<std::size_t>(j)] = std::move(col);
    }
    return kernel_basis(stacked);
}

// im(D1 D2) from the slack-enlarged preimage sector, met with the sector, in
// its coordinates. Empty when the preimage degrees are negative.
std::vector<SparseVec> bh_boundaries(const SectorBasis& basis, Slack slack)
{
    const GradedSector& s = basis.sector();
    if (s.p < 2 || s.d < 2)
        return {};
    GradedSector pre { s.p - 2, s.d - 2, s.N + slack.n, s.K + slack.k, -1 };
    GradedSector mid = image_sector(Diff::D2, pre);
    GradedSector ambSec = image_sector(Diff::D1, mid);
    ambSec.N = std::max(ambSec.N, s.N);
    ambSec.K = std::max(ambSec.K, s.K);
    SectorBasis amb(ambSec);
    OperatorMatrix md2 = operator_matrix(Diff::D2, pre);
    SectorBasis midBasis(md2.target);
    OperatorMatrix md1 = operator_matrix_into(Diff::D1, midBasis, amb);
    SparseMat composite = matmul(md1.m, md2.m);
    SparseMat w = inclusion_matrix(basis, amb);
    return to_sub_coordinates(meet_basis(composite, w), basis, amb);
}

} // namespace

int h_dimension(const GradedSector& s, Slack slack)
{
    SectorBasis basis(s);
    if (basis.dim() == 0)
        return 0;
    OperatorMatrix out = operator_matrix(Diff::D1, s);
    int kerDim = basis.dim() - rank(out.m);
    if (s.p == 0 || s.d == 0)
        return kerDim;
    GradedSector pre { s.p - 1, s.d - 1, s.N + slack.n, s.K + slack.k, s.L };
    std::vector<SparseVec> bnd = boundaries_in(Diff::D1, pre, basis);
    return kerDim - static_cast<int>(bnd.size());
}

int bh_dimension(const GradedSector& s, Slack slack)
{
    SectorBasis basis(s);
    if (basis.dim() == 0)
        return 0;
    std::vector<SparseVec> cocycles = bh_cocycles(basis);
    return quotient_dim(cocycles, bh_boundaries(basis, slack), basis.dim());
}

int lambda_cohomology(const GradedSector& s, Slack slack)
{
    if (s.L < 0)
        throw jetalg::AlgebraError("lambda_cohomology: sector carries no lambda bound");
    SectorBasis basis(s);
    if (basis.dim() == 0)
        return 0;
    OperatorMatrix out = operator_matrix(Diff::DLambda, s);
    int kerDim = basis.dim() - rank(out.m);
    if (s.p == 0 || s.d == 0)
        return kerDim;
    // Boundary sources also get lambda slack: cancellations between
    // adjacent lambda degrees can land an image inside the window.
    GradedSector pre { s.p - 1, s.d - 1, s.N + slack.n, s.K + slack.k, s.L + slack.n };
    std::vector<SparseVec> bnd = boundaries_in(Diff::DLambda, pre, basis);
    return kerDim - static_cast<int>(bnd.size());
}

namespace {

// The functional (F-hat) sector machinery, lambda-free: classes of local
// functionals are density classes modulo im d/dx, and the induced
// differentials are D1, D2 on representatives. Relative cocycles are
// densities a with D1 a ∈ im d/dx and D2 a ∈ im d/dx; boundaries are
// im(D1 D2) + im d/dx met with the sector.
struct FunctionalQuotient {
    SectorBasis v;       // the (p, d, N, K) sector
    SectorBasis preDx;   // d/dx preimages used for both relative conditions
    SectorBasis ambUp;   // common ambient for D1(v), D2(v), d/dx(preDx)
    SparseMat md1, md2;  // v -> ambUp
    SparseMat mdx;       // preDx -> ambUp
    std::vector<SparseVec> z; // relative cocycles, in v coordinates
    std::vector<SparseVec> b; // boundaries, in v coordinates
};

FunctionalQuotient functional_quotient(const GradedSector& s, Slack slack)
{
    GradedSector preSec { s.p + 1, s.d, s.N + slack.n, s.K + slack.k + 2, -1 };
    GradedSector ambSec { s.p + 1, s.d + 1, s.N + slack.n + 1, s.K + slack.k + 2, -1 };
    FunctionalQuotient f { SectorBasis(s), SectorBasis(preSec), SectorBasis(ambSec),
        {}, {}, {}, {}, {} };
    f.md1 = operator_matrix_into(Diff::D1, f.v, f.ambUp).m;
    f.md2 = operator_matrix_into(Diff::D2, f.v, f.ambUp).m;
    f.mdx = derivative_matrix_into(f.preDx, f.ambUp).m;

    // Relative cocycles: kernel triples (x, y1, y2) of the block system
    // D1 x = d/dx y1, D2 x = d/dx y2, projected onto x and pruned.
    const int rows = f.ambUp.dim();
    SparseMat block;
    block.rows = 2 * rows;
    for (int j = 0; j < f.v.dim(); ++j) {
        SparseVec col = f.md1.cols[static_cast<std::size_t>(j)];
        for (const auto& [i, c] : f.md2.cols[static_cast<std::size_t>(j)].e)
            col.e.emplace_back(i + rows, c);
        block.cols.push_back(std::move(col));
    }
    for (const SparseVec& dx : f.mdx.cols)
        block.cols.push_back(dx); // rows 0..rows-1
    for (const SparseVec& dx : f.mdx.cols) {
        SparseVec shifted;
        for (const auto& [i, c] : dx.e)
            shifted.e.emplace_back(i + rows, c);
        block.cols.push_back(std::move(shifted));
    }
    std::vector<SparseVec> xs;
    for (const SparseVec& k : kernel_basis(block)) {
        SparseVec x;
        for (const auto& [j, c] : k.e)
            if (j < f.v.dim())
                x.e.emplace_back(j, c);
        if (!x.is_zero())
            xs.push_back(std::move(x));
    }
    f.z = column_space_basis(from_columns(f.v.dim(), xs));

    // Boundaries: (im D1 D2 + im d/dx) ∩ v.
    GradedSector ambVSec { s.p, s.d, s.N + slack.n + 2, s.K + slack.k + 2, -1 };
    SectorBasis ambV(ambVSec);
    SparseMat sum;
    sum.rows = ambV.dim();
    if (s.p >= 2 && s.d >= 2) {
        GradedSector pre2 { s.p - 2, s.d - 2, s.N + slack.n, s.K + slack.k, -1 };
        OperatorMatrix md2pre = operator_matrix(Diff::D2, pre2);
        SectorBasis midBasis(md2pre.target);
        OperatorMatrix md1mid = operator_matrix_into(Diff::D1, midBasis, ambV);
        sum = matmul(md1mid.m, md2pre.m);
    }
    if (s.d >= 1) {
        GradedSector srcDx { s.p, s.d - 1, s.N + slack.n, s.K + slack.k + 1, -1 };
        sum = hcat(sum, derivative_matrix_into(SectorBasis(srcDx), ambV).m);
    }
    SparseMat w = inclusion_matrix(f.v, ambV);
    f.b = to_sub_coordinates(meet_basis(sum, w), f.v, ambV);
    return f;
}

} // namespace

int functional_bh_dimension(const GradedSector& s, Slack slack)
{
    FunctionalQuotient f = functional_quotient(s, slack);
    return quotient_dim(f.z, f.b, f.v.dim());
}

ScanResult stabilization_scan(const std::function<int(int, int)>& dim, const ScanSchedule& sched)
{
    ScanResult r;
    int n = sched.n0;
    int k = sched.k0;
    for (int step = 0;; ++step) {
        r.value = dim(n, k);
        r.N = n;
        r.K = k;
        r.history.push_back(r.value);
        std::size_t h = r.history.size();
        if (h >= 3 && r.history[h - 1] == r.history[h - 2] && r.history[h - 2] == r.history[h - 3]) {
            r.stabilized = true;
            return r;
        }
        if (step == sched.cap)
            return r; // cap exceeded; reported, not fatal
        if (sched.growN)
            ++n;
        if (sched.growK)
            ++k;
    }
}

bool iso_crosscheck(int p, int d)
{
    if (d < 2)
        throw jetalg::AlgebraError("iso_crosscheck: the lambda presentation requires d >= 2");
    ScanSchedule sched { std::max(2, d), std::max(2, d), true, true, 6 };
    ScanResult bh = stabilization_scan(
        [&](int n, int k) { return bh_dimension(GradedSector { p, d, n, k, -1 }); }, sched);
    ScanResult lam = stabilization_scan(
        [&](int n, int k) { return lambda_cohomology(GradedSector { p, d, n, k, d + 2 }); }, sched);
    return bh.stabilized && lam.stabilized && bh.value == lam.value;
}

ExactnessReport exactness_scan(const GradedSector& base, Slack slack)
{
    if (base.d < 2)
        throw jetalg::AlgebraError("exactness_scan: requires d >= 2");
    ExactnessReport rep;
    rep.base = base;
    rep.note = "functional classes are density classes with jet order <= N modulo im d/dx; "
               "preimage sectors enlarged by slack (N+" + std::to_string(slack.n)
        + ", K+" + std::to_string(slack.k)
        + "); G3/G4 presented on the enlarged window (N+" + std::to_string(slack.n + 1)
        + ", K+" + std::to_string(slack.k + 4)
        + ") that contains the connecting representatives, so at sectors with "
          "nonzero limit the G3 defect counts the window excess";

    // G1 = BH^p_d(A) and G2 = BH^p_d(F), both presented on V.
    GradedSector vsec { base.p, base.d, base.N, base.K, -1 };
    FunctionalQuotient f = functional_quotient(vsec, slack);
    std::vector<SparseVec> z1 = bh_cocycles(f.v);
    std::vector<SparseVec> b1 = bh_boundaries(f.v, slack);
    rep.dimG1 = quotient_dim(z1, b1, f.v.dim());
    rep.dimG2 = quotient_dim(f.z, f.b, f.v.dim());

    // G3 = BH^{p+1}_d(A), presented on a sector large enough for the
    // connecting representatives b0 - D2 c (see below): b0 has u-degree
    // <= K+slack.k+2 and D2 c <= K+slack.k+4.
    GradedSector g3sec { base.p + 1, base.d, base.N + slack.n + 1, base.K + slack.k + 4, -1 };
    SectorBasis g3(g3sec);
    std::vector<SparseVec> z3 = bh_cocycles(g3);
    std::vector<SparseVec> b3 = bh_boundaries(g3, slack);
    rep.dimG3 = quotient_dim(z3, b3, g3.dim());

    // G4 = BH^{p+1}_{d+1}(A), presented on the d/dx image sector of G3's.
    GradedSector g4sec = derivative_image_sector(g3sec);
    SectorBasis g4(g4sec);
    std::vector<SparseVec> z4 = bh_cocycles(g4);
    std::vector<SparseVec> b4 = bh_boundaries(g4, slack);
    rep.dimG4 = quotient_dim(z4, b4, g4.dim());

    auto induced_rank = [](const std::vector<SparseVec>& images,
                            const std::vector<SparseVec>& targetBnd, int rows) {
        SparseMat bnd = from_columns(rows, targetBnd);
        return rank(hcat(from_columns(rows, images), bnd)) - rank(bnd);
    };

    // m1: projection G1 -> G2 (identity on representatives).
    rep.rank1 = induced_rank(z1, f.b, f.v.dim());

    // m2: connecting map G2 -> G3. For a relative cocycle a solve
    //   d/dx b0 = D2 a,  d/dx b1 = D1 a,  D1 c = b1,
    // and send [a] to [b0 - D2 c]; the choices move the class by
    // boundaries only.
    GradedSector csec { base.p, base.d - 1, base.N + slack.n, base.K + slack.k + 3, -1 };
    SectorBasis cb(csec);
    GradedSector midSec { base.p + 1, base.d, base.N + slack.n + 1, base.K + slack.k + 3, -1 };
    SectorBasis mid(midSec);
    SparseMat md1c = operator_matrix_into(Diff::D1, cb, mid).m;
    SparseMat md2c = operator_matrix_into(Diff::D2, cb, g3).m;
    SparseMat preToMid = inclusion_matrix(f.preDx, mid);
    SparseMat preToG3 = inclusion_matrix(f.preDx, g3);
    std::vector<SparseVec> connectImages;
    for (const SparseVec& a : f.z) {
        std::optional<SparseVec> b0 = solve(f.mdx, apply(f.md2, a));
        std::optional<SparseVec> bOne = solve(f.mdx, apply(f.md1, a));
        if (!b0 || !bOne)
            throw jetalg::AlgebraError("exactness_scan: relative cocycle without d/dx preimage");
        std::optional<SparseVec> c = solve(md1c, apply(preToMid, *bOne));
        if (!c)
            throw jetalg::AlgebraError("exactness_scan: D1 preimage missing; enlarge the slack");
        connectImages.push_back(
            sv_add_scaled(apply(preToG3, *b0), Rat(-1), apply(md2c, *c)));
    }
    rep.rank2 = induced_rank(connectImages, b3, g3.dim());

    // m3: induced by d/dx on representatives, G3 -> G4.
    SparseMat mdx34 = derivative_matrix_into(g3, g4).m;
    std::vector<SparseVec> dxImages;
    dxImages.reserve(z3.size());
    for (const SparseVec& z : z3)
        dxImages.push_back(apply(mdx34, z));
    rep.rank3 = induced_rank(dxImages, b4, g4.dim());

    rep.defectG2 = (rep.dimG2 - rep.rank2) - rep.rank1;
    rep.defectG3 = (rep.dimG3 - rep.rank3) - rep.rank2;
    return rep;
}

} // namespace cohomlab
