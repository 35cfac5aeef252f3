#include "cohomlab/exactmat.hpp"

#include "jetalg/errors.hpp"

#include <algorithm>
#include <map>

namespace cohomlab {

namespace {

// Forward-elimination workspace. Each stored pivot vector is monic with a
// leading row index not seen before; incoming vectors are reduced by
// repeatedly cancelling their leading entry, which strictly increases the
// leading row index, so reduction terminates. An optional history vector is
// carried through the same row operations, giving the expression of each
// pivot (or of a reduced-to-zero vector) in terms of the inserted columns.
class Eliminator {
public:
    struct Reduced {
        SparseVec v;
        SparseVec hist;
    };

    // Reduces (v, hist) against the current pivots in place.
    void reduce(SparseVec& v, SparseVec& hist) const
    {
        while (!v.e.empty()) {
            auto it = byPivot_.find(v.e.front().first);
            if (it == byPivot_.end())
                return;
            const Row& row = rows_[it->second];
            Rat c = -v.e.front().second; // row.v is monic
            v = sv_add_scaled(v, c, row.v);
            hist = sv_add_scaled(hist, c, row.hist);
        }
    }

    // Returns true (and stores a new monic pivot) when v is independent.
    bool insert(SparseVec v, SparseVec hist)
    {
        reduce(v, hist);
        if (v.e.empty()) {
            lastDependency_ = std::move(hist);
            return false;
        }
        Rat inv = Rat(1) / v.e.front().second;
        v = sv_scale(v, inv);
        hist = sv_scale(hist, inv);
        byPivot_[v.e.front().first] = static_cast<int>(rows_.size());
        rows_.push_back(Row { std::move(v), std::move(hist) });
        return true;
    }

    int rank() const { return static_cast<int>(rows_.size()); }
    // History of the most recent dependent insert (v ≡ -hist · columns... ).
    const SparseVec& last_dependency() const { return lastDependency_; }

private:
    struct Row {
        SparseVec v;
        SparseVec hist;
    };
    std::vector<Row> rows_;
    std::map<int, int> byPivot_;
    SparseVec lastDependency_;
};

SparseVec normalized(std::map<int, Rat>&& acc)
{
    SparseVec out;
    out.e.reserve(acc.size());
    for (auto& [i, c] : acc)
        if (c != 0)
            out.e.emplace_back(i, std::move(c));
    return out;
}

} // namespace

SparseVec sv_unit(int i)
{
    SparseVec v;
    v.e.emplace_back(i, Rat(1));
    return v;
}

SparseVec sv_scale(const SparseVec& v, const Rat& c)
{
    if (c == 0)
        return {};
    SparseVec out;
    out.e.reserve(v.e.size());
    for (const auto& [i, x] : v.e)
        out.e.emplace_back(i, x * c);
    return out;
}

SparseVec sv_add_scaled(const SparseVec& a, const Rat& c, const SparseVec& b)
{
    if (c == 0)
        return a;
    SparseVec out;
    out.e.reserve(a.e.size() + b.e.size());
    std::size_t i = 0, j = 0;
    while (i < a.e.size() || j < b.e.size()) {
        if (j == b.e.size() || (i < a.e.size() && a.e[i].first < b.e[j].first)) {
            out.e.push_back(a.e[i++]);
        } else if (i == a.e.size() || b.e[j].first < a.e[i].first) {
            out.e.emplace_back(b.e[j].first, c * b.e[j].second);
            ++j;
        } else {
            Rat s = a.e[i].second + c * b.e[j].second;
            if (s != 0)
                out.e.emplace_back(a.e[i].first, std::move(s));
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVec sv_reindex(const SparseVec& v, const std::vector<int>& rowMap)
{
    std::map<int, Rat> acc;
    for (const auto& [i, c] : v.e) {
        if (i < 0 || i >= static_cast<int>(rowMap.size()) || rowMap[i] < 0)
            throw jetalg::AlgebraError("sv_reindex: entry at a row with no image");
        acc[rowMap[i]] += c;
    }
    return normalized(std::move(acc));
}

SparseMat hcat(const SparseMat& a, const SparseMat& b)
{
    if (a.rows != b.rows)
        throw jetalg::AlgebraError("hcat: row counts differ");
    SparseMat out;
    out.rows = a.rows;
    out.cols = a.cols;
    out.cols.insert(out.cols.end(), b.cols.begin(), b.cols.end());
    return out;
}

SparseMat from_columns(int rows, std::vector<SparseVec> cols)
{
    SparseMat out;
    out.rows = rows;
    out.cols = std::move(cols);
    return out;
}

SparseVec apply(const SparseMat& m, const SparseVec& x)
{
    std::map<int, Rat> acc;
    for (const auto& [j, c] : x.e) {
        if (j < 0 || j >= m.col_count())
            throw jetalg::AlgebraError("apply: column index out of range");
        for (const auto& [i, a] : m.cols[j].e)
            acc[i] += a * c;
    }
    return normalized(std::move(acc));
}

SparseMat matmul(const SparseMat& a, const SparseMat& b)
{
    SparseMat out;
    out.rows = a.rows;
    out.cols.reserve(b.cols.size());
    for (const SparseVec& col : b.cols) {
        if (!col.e.empty() && col.e.back().first >= a.col_count())
            throw jetalg::AlgebraError("matmul: inner dimensions differ");
        out.cols.push_back(apply(a, col));
    }
    return out;
}

int rank(const SparseMat& m)
{
    Eliminator el;
    for (const SparseVec& c : m.cols)
        el.insert(c, SparseVec {});
    return el.rank();
}

std::vector<SparseVec> kernel_basis(const SparseMat& m)
{
    Eliminator el;
    std::vector<SparseVec> out;
    for (int j = 0; j < m.col_count(); ++j)
        if (!el.insert(m.cols[j], sv_unit(j)))
            out.push_back(el.last_dependency());
    return out;
}

Residue reduce_residual(const SparseMat& m, const SparseVec& b)
{
    Eliminator el;
    for (int j = 0; j < m.col_count(); ++j)
        el.insert(m.cols[j], sv_unit(j));
    SparseVec v = b;
    SparseVec hist;
    el.reduce(v, hist);
    return Residue { std::move(v), sv_scale(hist, Rat(-1)) };
}

std::optional<SparseVec> solve(const SparseMat& m, const SparseVec& b)
{
    Residue r = reduce_residual(m, b);
    if (!r.residue.is_zero())
        return std::nullopt;
    return std::move(r.solution);
}

std::vector<SparseVec> column_space_basis(const SparseMat& m)
{
    Eliminator el;
    std::vector<SparseVec> out;
    for (const SparseVec& c : m.cols)
        if (el.insert(c, SparseVec {}))
            out.push_back(c);
    return out;
}

int meet_dim(const SparseMat& a, const SparseMat& w)
{
    return rank(a) + rank(w) - rank(hcat(a, w));
}

std::vector<SparseVec> meet_basis(const SparseMat& a, const SparseMat& w)
{
    // Zassenhaus-style: kernel vectors (x, y) of [a | w] satisfy a·x = -w·y,
    // so the a·x span the intersection; prune to an independent set.
    SparseMat joint = hcat(a, w);
    std::vector<SparseVec> raw;
    for (const SparseVec& k : kernel_basis(joint)) {
        SparseVec x;
        for (const auto& [j, c] : k.e)
            if (j < a.col_count())
                x.e.emplace_back(j, c);
        SparseVec v = apply(a, x);
        if (!v.is_zero())
            raw.push_back(std::move(v));
    }
    Eliminator el;
    std::vector<SparseVec> out;
    for (SparseVec& v : raw)
        if (el.insert(v, SparseVec {}))
            out.push_back(std::move(v));
    return out;
}

} // namespace cohomlab
