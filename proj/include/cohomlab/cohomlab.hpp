#pragma once
// Cohomology dimensions over truncated graded sectors: H(A, D1), the
// bihamiltonian groups BH = (ker D1 ∩ ker D2)/im(D1 D2), their
// lambda-complex presentation H(A_lambda, D_lambda), the induced functional
// sectors (quotients by im d/dx), long-exact-sequence consistency checks and
// stabilization scans over the truncation parameters.
//
// All statements are verified in the polynomial-in-u sector; the smooth
// coefficient classes of the full theory are represented by their
// polynomial members (a(u) of degree <= K contributes K+1 dimensions).

#include "cohomlab/sector.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cohomlab {

// Enlargement of preimage sectors used when computing image subspaces, so
// boundaries reaching the sector from just outside the truncation are seen.
struct Slack {
    int n = 2;
    int k = 2;
};

// dim H^p_d(A, D1) over the truncation s (s.p, s.d are the target degrees).
int h_dimension(const GradedSector& s, Slack slack = {});
// dim BH^p_d(A) = dim (ker D1 ∩ ker D2)/im(D1 D2) over s.
int bh_dimension(const GradedSector& s, Slack slack = {});
// dim H^p_d(A_lambda, D_lambda) over s (requires s.L >= 0). Reliable where
// the stabilized value is 0; at sectors with nonzero limit the finite
// K-window lets lambda-weighted classes escape the u-degree cut, so prefer
// bh_dimension / functional_bh_dimension there.
int lambda_cohomology(const GradedSector& s, Slack slack = {});
// dim BH^p_d(F) on the variational quotient: density classes a with
// D1 a ∈ im d/dx and D2 a ∈ im d/dx, modulo im(D1 D2) + im d/dx.
int functional_bh_dimension(const GradedSector& s, Slack slack = {});

struct ScanSchedule {
    int n0 = 0;
    int k0 = 0;
    bool growN = true;
    bool growK = true;
    int cap = 6; // maximum number of increments past the starting point
};

struct ScanResult {
    int value = 0;
    int N = 0;
    int K = 0; // witness truncation of the last evaluation
    bool stabilized = false;
    std::vector<int> history;
};

// Re-evaluates dim(N, K) on a growing schedule until the value is unchanged
// for two consecutive increments; a cap overrun is reported, not fatal.
ScanResult stabilization_scan(const std::function<int(int, int)>& dim, const ScanSchedule& sched);

// Stabilized bh_dimension(p,d) equals stabilized lambda_cohomology(p,d)
// (the lambda-presentation isomorphism; meaningful for d >= 2, and only
// trustworthy at sectors whose stabilized value is 0 — see lambda_cohomology).
bool iso_crosscheck(int p, int d);

// Consistency of the long exact sequence segment
//   BH^p_d(A) -> BH^p_d(F) -> BH^{p+1}_d(A) -> BH^{p+1}_{d+1}(A)
// at a fixed truncation, with the A-groups as BH quotients and the
// functional group as the variational quotient. The maps are the projection,
// the connecting map (solve d/dx b0 = D2 a, d/dx b1 = D1 a, D1 c = b1, send
// [a] to [b0 - D2 c]) and the map induced by d/dx.
struct ExactnessReport {
    GradedSector base;               // the (p, d, N, K) presentation sector
    int dimG1 = 0, dimG2 = 0, dimG3 = 0, dimG4 = 0;
    int rank1 = 0, rank2 = 0, rank3 = 0;
    int defectG2 = 0; // dim ker(connecting) - rank(projection)
    int defectG3 = 0; // dim ker(d/dx induced) - rank(connecting)
    std::string note; // truncation bookkeeping convention, for the report
    bool exact() const { return defectG2 == 0 && defectG3 == 0; }
};
ExactnessReport exactness_scan(const GradedSector& base, Slack slack = {});

} // namespace cohomlab
