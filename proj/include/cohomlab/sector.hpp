#pragma once
// Truncated graded sectors of the scalar (n = 1) jet algebra — spanned by
// lambda^l * u^a * (jet monomial) with super degree p, standard degree
// exactly d, jet orders <= N, u-exponent a <= K and lambda degree <= L — and
// exact matrices of the differentials D1, D2, D_lambda = D2 - lambda*D1 and
// of the total x-derivative between such sectors.
//
// The differentials are applied in closed form from their defining sums
//   D1 = sum_s th^{s+1} d/du^s,
//   D2 = sum_s d^s(u th1 + 1/2 u1 th) d/du^s + sum_s d^s(1/2 th th1) d/dth^s,
// independently of the variational bivector machinery, which the tests
// cross-check against.

#include "cohomlab/exactmat.hpp"
#include "jetalg/diffpoly.hpp"

#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace cohomlab {

using jetalg::DiffPoly;
using jetalg::Monomial;

struct GradedSector {
    int p = 0;  // super degree
    int d = 0;  // standard degree
    int N = 0;  // jet-order bound
    int K = 0;  // u-degree bound
    int L = -1; // lambda-degree bound; negative = no lambda factor
};

struct BasisElement {
    int lpow = 0;      // lambda exponent
    int upow = 0;      // exponent of the order-0 variable u
    Monomial jets;     // atoms of order >= 1 (even) resp. >= 0 (odd)
};

class SectorBasis {
public:
    explicit SectorBasis(const GradedSector& s);

    const GradedSector& sector() const { return s_; }
    int dim() const { return static_cast<int>(elems_.size()); }
    const BasisElement& at(int i) const { return elems_.at(static_cast<std::size_t>(i)); }
    int index_of(const BasisElement& e) const; // -1 when outside the sector
    DiffPoly poly(int i) const;                // the lambda power is dropped
    std::string text(int i) const;

private:
    GradedSector s_;
    std::vector<BasisElement> elems_;
    std::map<std::tuple<int, int, Monomial>, int,
        bool (*)(const std::tuple<int, int, Monomial>&, const std::tuple<int, int, Monomial>&)>
        index_;
};

enum class Diff { D1, D2, DLambda };

// Closed-form application of the two differentials (lambda-free part).
DiffPoly apply_d1(const DiffPoly& f);
DiffPoly apply_d2(const DiffPoly& f);

// Smallest sector guaranteed to contain the image of the given map.
GradedSector image_sector(Diff which, const GradedSector& s);
GradedSector derivative_image_sector(const GradedSector& s);

struct OperatorMatrix {
    GradedSector source, target;
    SparseMat m;
};

OperatorMatrix operator_matrix(Diff which, const GradedSector& src);
OperatorMatrix operator_matrix_into(Diff which, const SectorBasis& src, const SectorBasis& dst);
OperatorMatrix derivative_matrix_into(const SectorBasis& src, const SectorBasis& dst);
// Unit-column embedding of a subsector basis into an ambient basis.
SparseMat inclusion_matrix(const SectorBasis& sub, const SectorBasis& amb);

// Coordinates of sum_l lambda^l * piece_l in a basis; throws AlgebraError when
// a monomial falls outside the sector.
SparseVec coordinates(const SectorBasis& b, const std::vector<std::pair<int, DiffPoly>>& lambdaPieces);

} // namespace cohomlab
