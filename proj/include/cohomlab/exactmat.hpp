#pragma once
// Exact sparse linear algebra over the rationals for the sector
// computations: rank, kernel, solve, and subspace arithmetic (column-space
// bases, intersections). Deterministic by construction: columns are
// processed in input order and the pivot of a vector is its smallest row
// index, so results never depend on hashing or scheduling.

#include "jetalg/rational.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace cohomlab {

using jetalg::Rat;

// Sparse column vector; entries sorted by row index, no zeros.
struct SparseVec {
    std::vector<std::pair<int, Rat>> e;

    bool is_zero() const { return e.empty(); }
    bool operator==(const SparseVec&) const = default;
};

SparseVec sv_unit(int i);
SparseVec sv_scale(const SparseVec& v, const Rat& c);
SparseVec sv_add_scaled(const SparseVec& a, const Rat& c, const SparseVec& b); // a + c*b
// Entries re-indexed through a row map (other rows must not occur; -1 forbids).
SparseVec sv_reindex(const SparseVec& v, const std::vector<int>& rowMap);

struct SparseMat {
    int rows = 0;
    std::vector<SparseVec> cols;

    int col_count() const { return static_cast<int>(cols.size()); }
};

SparseMat hcat(const SparseMat& a, const SparseMat& b);
SparseMat from_columns(int rows, std::vector<SparseVec> cols);
SparseVec apply(const SparseMat& m, const SparseVec& x);
SparseMat matmul(const SparseMat& a, const SparseMat& b);

int rank(const SparseMat& m);
// Kernel basis in echelon gauge (each vector has unit coordinate at a
// distinct non-pivot column, earlier pivot columns filled in).
std::vector<SparseVec> kernel_basis(const SparseMat& m);
// Echelon reduction of b against the column space: b = m·solution + residue,
// with residue zero exactly when the system is consistent (then solution is
// the free-variables-zero solution).
struct Residue {
    SparseVec residue;
    SparseVec solution;
};
Residue reduce_residual(const SparseMat& m, const SparseVec& b);
// Solution with free variables zero; nullopt if inconsistent.
std::optional<SparseVec> solve(const SparseMat& m, const SparseVec& b);

// Reduced spanning subset of the columns (a basis of the column space).
std::vector<SparseVec> column_space_basis(const SparseMat& m);
// dim( col(a) ∩ col(w) ) = rank a + rank w − rank [a|w].
int meet_dim(const SparseMat& a, const SparseMat& w);
// Explicit basis of col(a) ∩ col(w), as vectors in the common row space.
std::vector<SparseVec> meet_basis(const SparseMat& a, const SparseMat& w);

} // namespace cohomlab
