#include "cohomlab/sector.hpp"

#include "jetalg/errors.hpp"
#include "jetalg/print.hpp"

#include <algorithm>

namespace cohomlab {

using jetalg::Atom;
using jetalg::atom_even;
using jetalg::atom_odd;
using jetalg::Coefficient;
using jetalg::monomial_cmp;
using jetalg::Rat;
using jetalg::ScalarPoly;
using jetalg::sp_pow;
using jetalg::uvar;

namespace {

bool key_less(const std::tuple<int, int, Monomial>& a, const std::tuple<int, int, Monomial>& b)
{
    if (std::get<0>(a) != std::get<0>(b))
        return std::get<0>(a) < std::get<0>(b);
    if (std::get<1>(a) != std::get<1>(b))
        return std::get<1>(a) < std::get<1>(b);
    return monomial_cmp(std::get<2>(a), std::get<2>(b)) < 0;
}

// All strictly increasing odd-order tuples t_1 < ... < t_p in [0, N] with
// sum <= budget, paired with every partition of the remainder into even jet
// orders in [1, N].
void gen_even(int remainder, int maxPart, std::vector<int>& parts,
    const std::vector<int>& odd, std::vector<Monomial>& out)
{
    if (remainder == 0) {
        Monomial m;
        for (int t : odd)
            m.odd.push_back(atom_odd(1, t));
        for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
            Atom a = atom_even(1, *it);
            if (!m.even.empty() && m.even.back().first == a)
                ++m.even.back().second;
            else
                m.even.push_back({ a, 1 });
        }
        out.push_back(std::move(m));
        return;
    }
    for (int part = std::min(remainder, maxPart); part >= 1; --part) {
        parts.push_back(part);
        gen_even(remainder - part, part, parts, odd, out);
        parts.pop_back();
    }
}

void gen_odd(int slotsLeft, int minOrder, int budget, int N, std::vector<int>& odd,
    std::vector<Monomial>& out)
{
    if (slotsLeft == 0) {
        std::vector<int> parts;
        gen_even(budget, N, parts, odd, out);
        return;
    }
    for (int t = minOrder; t <= N && t <= budget; ++t) {
        odd.push_back(t);
        gen_odd(slotsLeft - 1, t + 1, budget - t, N, odd, out);
        odd.pop_back();
    }
}

std::vector<Monomial> sector_monomials(int p, int d, int N)
{
    std::vector<Monomial> out;
    if (p < 0 || d < 0 || N < 0)
        return out;
    std::vector<int> odd;
    gen_odd(p, 0, d, N, odd, out);
    // Keep only exact standard degree d (gen_odd budgets are "<=", and the
    // even partition absorbs the exact remainder, so this always holds).
    std::erase_if(out, [&](const Monomial& m) { return jetalg::monomial_standard_degree(m) != d; });
    return out;
}

} // namespace

SectorBasis::SectorBasis(const GradedSector& s)
    : s_(s)
    , index_(key_less)
{
    const int lmax = std::max(0, s.L);
    std::vector<Monomial> monos = sector_monomials(s.p, s.d, s.N);
    std::sort(monos.begin(), monos.end(), jetalg::MonomialLess {});
    for (int l = 0; l <= lmax; ++l)
        for (int a = 0; a <= s.K; ++a)
            for (const Monomial& m : monos)
                elems_.push_back(BasisElement { l, a, m });
    for (int i = 0; i < dim(); ++i)
        index_.emplace(std::make_tuple(elems_[static_cast<std::size_t>(i)].lpow,
                           elems_[static_cast<std::size_t>(i)].upow,
                           elems_[static_cast<std::size_t>(i)].jets),
            i);
}

int SectorBasis::index_of(const BasisElement& e) const
{
    auto it = index_.find(std::make_tuple(e.lpow, e.upow, e.jets));
    return it == index_.end() ? -1 : it->second;
}

DiffPoly SectorBasis::poly(int i) const
{
    const BasisElement& e = at(i);
    DiffPoly f(1);
    f.add_term(e.jets, Coefficient(sp_pow(ScalarPoly::variable(uvar(1)), static_cast<unsigned>(e.upow))));
    return f;
}

std::string SectorBasis::text(int i) const
{
    const BasisElement& e = at(i);
    std::string s;
    if (e.lpow > 0) {
        s += "l";
        if (e.lpow > 1)
            s += "^" + std::to_string(e.lpow);
        s += "*";
    }
    return s + jetalg::to_text(poly(i));
}

DiffPoly apply_d1(const DiffPoly& f)
{
    DiffPoly out(f.components());
    const int jmax = std::max(0, jetalg::jet_order(f));
    for (int s = 0; s <= jmax; ++s)
        out = out + mul(DiffPoly::atom(1, atom_odd(1, s + 1)), partial(f, atom_even(1, s)));
    return out;
}

DiffPoly apply_d2(const DiffPoly& f)
{
    DiffPoly out(f.components());
    const int jmax = std::max(0, jetalg::jet_order(f));
    DiffPoly evenCoef = mul(DiffPoly::atom(1, atom_even(1, 0)), DiffPoly::atom(1, atom_odd(1, 1)))
        + mul(DiffPoly::atom(1, atom_even(1, 1)), DiffPoly::atom(1, atom_odd(1, 0))) * jetalg::rat(1, 2);
    DiffPoly oddCoef = mul(DiffPoly::atom(1, atom_odd(1, 0)), DiffPoly::atom(1, atom_odd(1, 1))) * jetalg::rat(1, 2);
    for (int s = 0; s <= jmax; ++s) {
        out = out + mul(evenCoef, partial(f, atom_even(1, s)))
            + mul(oddCoef, partial(f, atom_odd(1, s)));
        evenCoef = total_derivative(evenCoef);
        oddCoef = total_derivative(oddCoef);
    }
    return out;
}

GradedSector image_sector(Diff which, const GradedSector& s)
{
    GradedSector t = s;
    t.p = s.p + 1;
    t.d = s.d + 1;
    t.N = s.N + 1;
    switch (which) {
    case Diff::D1:
        break;
    case Diff::D2:
        t.K = s.K + 1;
        break;
    case Diff::DLambda:
        t.K = s.K + 1;
        if (s.L < 0)
            throw jetalg::AlgebraError("image_sector: D_lambda needs a lambda-graded sector");
        t.L = s.L + 1;
        break;
    }
    return t;
}

GradedSector derivative_image_sector(const GradedSector& s)
{
    GradedSector t = s;
    t.d = s.d + 1;
    t.N = s.N + 1;
    return t;
}

SparseVec coordinates(const SectorBasis& b, const std::vector<std::pair<int, DiffPoly>>& lambdaPieces)
{
    std::map<int, Rat> acc;
    for (const auto& [lpow, f] : lambdaPieces) {
        for (const auto& [mono, coef] : f.terms()) {
            if (!coef.den_is_one() || coef.has_symjets())
                throw jetalg::AlgebraError("coordinates: coefficient is not polynomial in u");
            for (const auto& [smono, r] : coef.num().t) {
                int upow = 0;
                if (smono.size() == 1 && jetalg::var_is_uvar(smono[0].v))
                    upow = static_cast<int>(smono[0].e);
                else if (!smono.empty())
                    throw jetalg::AlgebraError("coordinates: unexpected scalar variable");
                int idx = b.index_of(BasisElement { lpow, upow, mono });
                if (idx < 0)
                    throw jetalg::AlgebraError("coordinates: monomial outside the sector");
                acc[idx] += r;
            }
        }
    }
    SparseVec out;
    for (auto& [i, c] : acc)
        if (c != 0)
            out.e.emplace_back(i, std::move(c));
    return out;
}

namespace {

std::vector<std::pair<int, DiffPoly>> apply_pieces(Diff which, const BasisElement& e, const DiffPoly& f)
{
    switch (which) {
    case Diff::D1:
        return { { e.lpow, apply_d1(f) } };
    case Diff::D2:
        return { { e.lpow, apply_d2(f) } };
    case Diff::DLambda:
        return { { e.lpow, apply_d2(f) }, { e.lpow + 1, -apply_d1(f) } };
    }
    throw jetalg::AlgebraError("apply_pieces: bad differential");
}

} // namespace

OperatorMatrix operator_matrix_into(Diff which, const SectorBasis& src, const SectorBasis& dst)
{
    OperatorMatrix out { src.sector(), dst.sector(), {} };
    out.m.rows = dst.dim();
    out.m.cols.reserve(static_cast<std::size_t>(src.dim()));
    for (int j = 0; j < src.dim(); ++j)
        out.m.cols.push_back(coordinates(dst, apply_pieces(which, src.at(j), src.poly(j))));
    return out;
}

OperatorMatrix operator_matrix(Diff which, const GradedSector& src)
{
    SectorBasis sb(src);
    SectorBasis db(image_sector(which, src));
    return operator_matrix_into(which, sb, db);
}

OperatorMatrix derivative_matrix_into(const SectorBasis& src, const SectorBasis& dst)
{
    OperatorMatrix out { src.sector(), dst.sector(), {} };
    out.m.rows = dst.dim();
    out.m.cols.reserve(static_cast<std::size_t>(src.dim()));
    for (int j = 0; j < src.dim(); ++j)
        out.m.cols.push_back(coordinates(dst, { { src.at(j).lpow, total_derivative(src.poly(j)) } }));
    return out;
}

SparseMat inclusion_matrix(const SectorBasis& sub, const SectorBasis& amb)
{
    SparseMat m;
    m.rows = amb.dim();
    m.cols.reserve(static_cast<std::size_t>(sub.dim()));
    for (int j = 0; j < sub.dim(); ++j) {
        int idx = amb.index_of(sub.at(j));
        if (idx < 0)
            throw jetalg::AlgebraError("inclusion_matrix: subsector element missing from ambient");
        m.cols.push_back(sv_unit(idx));
    }
    return m;
}

} // namespace cohomlab
