#include "deform/deform.hpp"

#include "cohomlab/exactmat.hpp"
#include "jetalg/errors.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <tuple>
#include <utility>

namespace deform {

using cohomlab::Residue;
using cohomlab::SectorBasis;
using cohomlab::SparseMat;
using cohomlab::SparseVec;
using jetalg::AlgebraError;
using jetalg::atom_even;
using jetalg::atom_odd;
using jetalg::Coefficient;
using jetalg::Monomial;
using jetalg::SMono;
using structures::PoissonPair;
using varcalc::functional_equal;
using varcalc::functional_is_zero;
using varcalc::schouten;

namespace {

constexpr int kMaxRetries = 2;

// Canonical rational coordinates of a local functional: the concatenated
// monomial coordinates of all its variational derivatives (odd then even,
// per component). Injective on functionals of positive super degree, which
// is exactly what makes the linear systems well posed modulo im d/dx.
class DeltaCoords {
public:
    explicit DeltaCoords(int n) : n_(n) { }

    SparseVec coords(const LocalFunctional& f)
    {
        SparseVec out;
        for (int i = 1; i <= n_; ++i) {
            collect(var_deriv_odd(f, i), 2 * (i - 1), out);
            collect(var_deriv_even(f, i), 2 * (i - 1) + 1, out);
        }
        std::sort(out.e.begin(), out.e.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    int rows() const { return next_; }

private:
    using Key = std::tuple<int, Monomial, SMono>;
    struct KeyLess {
        bool operator()(const Key& a, const Key& b) const
        {
            if (std::get<0>(a) != std::get<0>(b))
                return std::get<0>(a) < std::get<0>(b);
            if (int c = jetalg::monomial_cmp(std::get<1>(a), std::get<1>(b)); c != 0)
                return c < 0;
            return jetalg::smono_cmp(std::get<2>(a), std::get<2>(b)) < 0;
        }
    };

    void collect(const jetalg::DiffPoly& g, int slot, SparseVec& out)
    {
        for (const auto& [mono, coef] : g.terms()) {
            if (!coef.den_is_one() || coef.has_symjets())
                throw AlgebraError(
                    "deform: linear solving works over the polynomial sector "
                    "(no function symbols or rational-function coefficients)");
            for (const auto& [smono, r] : coef.num().t) {
                Key k { slot, mono, smono };
                auto [it, fresh] = index_.try_emplace(k, next_);
                if (fresh)
                    ++next_;
                out.e.emplace_back(it->second, r);
            }
        }
    }

    int n_;
    int next_ = 0;
    std::map<Key, int, KeyLess> index_;
};

void apply_defaults(AnsatzSpace& cfg)
{
    if (cfg.N < 0)
        cfg.N = cfg.d;
    if (cfg.K < 0)
        cfg.K = cfg.d + 2;
}

DiffPoly ansatz_combination(const SectorBasis& basis, const SparseVec& x)
{
    DiffPoly out(1);
    for (const auto& [j, c] : x.e)
        out = out + basis.poly(j) * c;
    return out;
}

struct Attempt {
    bool ok = false;
    LocalFunctional X;
    LocalFunctional residual;
    std::vector<std::pair<int, Rat>> certificate;
};

// Assembles and echelon-solves image(e_j) = rhs over the ansatz, where the
// image map is given column by column. On failure the partial solution X*
// yields the exact residual functional rhs - image(X*).
Attempt attempt_solve(const AnsatzSpace& cfg, const LocalFunctional& rhs,
    const std::function<LocalFunctional(const LocalFunctional&)>& image)
{
    SectorBasis basis(cohomlab::GradedSector { cfg.p, cfg.d, cfg.N, cfg.K, -1 });
    DeltaCoords coords(1);
    std::vector<SparseVec> cols;
    cols.reserve(static_cast<std::size_t>(basis.dim()));
    std::vector<LocalFunctional> images;
    images.reserve(static_cast<std::size_t>(basis.dim()));
    for (int j = 0; j < basis.dim(); ++j) {
        images.emplace_back(image(LocalFunctional(basis.poly(j))));
        cols.push_back(coords.coords(images.back()));
    }
    SparseVec b = coords.coords(rhs);
    SparseMat a { coords.rows(), std::move(cols) };

    Residue r = cohomlab::reduce_residual(a, b);
    Attempt out;
    out.X = LocalFunctional(ansatz_combination(basis, r.solution));
    if (r.residue.is_zero()) {
        out.ok = true;
        return out;
    }
    DiffPoly res = rhs.density;
    for (const auto& [j, c] : r.solution.e)
        res = res - images[static_cast<std::size_t>(j)].density * c;
    out.residual = LocalFunctional(res);
    out.certificate = r.residue.e;
    return out;
}

void require_scalar(const DiffPoly& f, const char* who)
{
    if (f.components() != 1)
        throw AlgebraError(std::string(who) + ": scalar case only (one component)");
}

} // namespace

DeformStep solve_next_order(const PoissonPair& pair, const std::vector<LocalFunctional>& Q,
    AnsatzSpace cfg)
{
    const int m = static_cast<int>(Q.size()) + 1;
    require_scalar(pair.P1.density, "solve_next_order");

    // The inputs must satisfy the defining equations through order m-1.
    for (int k = 1; k < m; ++k) {
        if (!functional_is_zero(schouten(pair.P1, Q[static_cast<std::size_t>(k - 1)])))
            throw AlgebraError("solve_next_order: [P1, Q_" + std::to_string(k) + "] != 0");
        DiffPoly rhs = schouten(pair.P2, Q[static_cast<std::size_t>(k - 1)]).density;
        for (int i = 1; i < k; ++i)
            rhs = rhs
                + schouten(Q[static_cast<std::size_t>(i - 1)], Q[static_cast<std::size_t>(k - i - 1)])
                        .density
                    * Rat(1, 2);
        if (!functional_is_zero(LocalFunctional(rhs)))
            throw AlgebraError("solve_next_order: Q_" + std::to_string(k)
                + " violates its defining equation");
    }

    DiffPoly w(1);
    for (int i = 1; i < m; ++i)
        w = w
            + schouten(Q[static_cast<std::size_t>(i - 1)], Q[static_cast<std::size_t>(m - i - 1)])
                    .density
                * Rat(1, 2);
    LocalFunctional W(w);
    if (!functional_is_zero(schouten(pair.P1, W)) || !functional_is_zero(schouten(pair.P2, W)))
        throw AlgebraError("solve_next_order: W_m is not closed under both structures");

    if (cfg.d <= 0)
        cfg.d = 2 * m;
    apply_defaults(cfg);

    auto image = [&](const LocalFunctional& e) { return schouten(pair.P1, schouten(pair.P2, e)); };

    DeformStep step;
    AnsatzSpace cur = cfg;
    std::vector<LocalFunctional> residuals;
    for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
        Attempt a = attempt_solve(cur, W, image);
        step.retries = attempt;
        step.used = cur;
        if (a.ok) {
            step.status = SolveStatus::Solved;
            step.X = a.X;
            step.Q = schouten(pair.P1, a.X);
            if (!functional_is_zero(schouten(pair.P1, step.Q))
                || !functional_equal(schouten(pair.P2, step.Q), LocalFunctional(-W.density)))
                throw AlgebraError("solve_next_order: internal check of the defining "
                                   "equations failed");
            return step;
        }
        residuals.push_back(a.residual);
        step.obstruction = Obstruction { a.residual, a.certificate };
        cur.N *= 2;
        cur.K *= 2;
    }
    bool stable = true;
    for (const LocalFunctional& r : residuals)
        stable = stable && functional_equal(r, residuals.front());
    step.status = stable ? SolveStatus::ObstructionNonzero : SolveStatus::AnsatzTooSmall;
    return step;
}

LocalFunctional miura_apply(const LocalFunctional& x, const LocalFunctional& p, int maxOrder)
{
    if (maxOrder < 0)
        throw AlgebraError("miura_apply: negative truncation order");
    if (jetalg::valuation(x.density) < 1)
        throw AlgebraError("miura_apply: the generator must have positive valuation");
    if (p.density.is_zero())
        return p;
    const int bound = jetalg::valuation(p.density) + maxOrder;
    DiffPoly term = standard_truncate(p.density, bound);
    DiffPoly acc = term;
    for (int k = 1; !term.is_zero(); ++k) {
        term = standard_truncate(schouten(x, LocalFunctional(term)).density, bound) * Rat(1, k);
        acc = acc + term;
    }
    return LocalFunctional(acc);
}

TrivializeResult trivialize(const LocalFunctional& q, const LocalFunctional& p1, AnsatzSpace cfg)
{
    require_scalar(p1.density, "trivialize");
    TrivializeResult out;
    if (q.density.is_zero()) {
        out.ok = true;
        out.X = LocalFunctional(DiffPoly(q.density.components()));
        return out;
    }
    int pq = 0, dq = 0, pp = 0, dp = 0;
    if (!jetalg::is_bihomogeneous(q.density, pq, dq) || pq != 2)
        throw AlgebraError("trivialize: Q must be a bihomogeneous bivector");
    if (!jetalg::is_bihomogeneous(p1.density, pp, dp) || pp != 2)
        throw AlgebraError("trivialize: P1 must be a bihomogeneous bivector");
    if (!functional_is_zero(schouten(p1, q)))
        throw AlgebraError("trivialize: [P1, Q] != 0");
    if (dq < dp) {
        out.hint = "degree of Q is below the degree shift of [P1, -]";
        return out;
    }
    cfg.d = dq - dp;
    apply_defaults(cfg);
    auto image = [&](const LocalFunctional& e) { return schouten(p1, e); };
    Attempt a = attempt_solve(cfg, q, image);
    if (a.ok) {
        out.ok = true;
        out.X = a.X;
        return out;
    }
    out.hint = "not in the image at truncation (N=" + std::to_string(cfg.N)
        + ", K=" + std::to_string(cfg.K) + "); retry with a larger ansatz";
    return out;
}

DiffPoly homotopy_L52(const DiffPoly& f, int n)
{
    require_scalar(f, "homotopy_L52");
    if (n < 1)
        throw AlgebraError("homotopy_L52: requires N >= 1");
    if (jetalg::jet_order(f) > n)
        throw AlgebraError("homotopy_L52: F has jet order above N");
    if (!partial(f, atom_even(1, n)).is_zero())
        throw AlgebraError("homotopy_L52: F depends on u^N");
    DiffPoly fN = partial(f, atom_odd(1, n));
    return antiderivative(fN, atom_even(1, n - 1));
}

ThetaSplit reduce_L53(const DiffPoly& f, int n)
{
    require_scalar(f, "reduce_L53");
    if (n < 1)
        throw AlgebraError("reduce_L53: requires N >= 1");
    if (jetalg::jet_order(f) > n)
        throw AlgebraError("reduce_L53: F has jet order above N");
    if (jetalg::jet_order(cohomlab::apply_d1(cohomlab::apply_d2(f))) > n + 1)
        throw AlgebraError("reduce_L53: D1 D2 F has jet order above N+1");
    const DiffPoly theta = DiffPoly::atom(1, atom_odd(1, 0));
    ThetaSplit out;
    out.A = partial(f, atom_odd(1, 0));
    DiffPoly b1 = f - mul(theta, out.A);
    if (!partial(b1, atom_even(1, n)).is_zero())
        throw AlgebraError("reduce_L53: the theta-free part depends on u^N, so "
                           "D1 D2 F cannot have jet order <= N+1");
    out.X = homotopy_L52(b1, n);
    out.B = b1 - cohomlab::apply_d1(out.X);
    return out;
}

DiffPoly euler_solve(const DiffPoly& g, const Rat& a0,
    const std::vector<std::pair<Atom, Rat>>& weights)
{
    if (a0 < 0)
        throw AlgebraError("euler_solve: a0 must be nonnegative");
    for (const auto& [atom, wt] : weights) {
        if (!jetalg::atom_is_even(atom) || jetalg::atom_order(atom) == 0)
            throw AlgebraError("euler_solve: weighted variables must be even jet "
                               "atoms of positive order");
        if (wt <= 0)
            throw AlgebraError("euler_solve: weights must be positive");
    }
    DiffPoly out(g.components());
    for (const auto& [mono, coef] : g.terms()) {
        Rat denom = a0;
        for (const auto& [atom, wt] : weights)
            for (const auto& [b, e] : mono.even)
                if (b == atom)
                    denom += wt * Rat(static_cast<long>(e));
        if (denom == 0)
            throw AlgebraError("euler_solve: a0 = 0 requires the part of g free of "
                               "every weighted variable to vanish");
        out.add_term(mono, coef * (Rat(1) / denom));
    }
    return out;
}

SecondReduction reduce_L55(const DiffPoly& f, int n)
{
    require_scalar(f, "reduce_L55");
    if (n < 1)
        throw AlgebraError("reduce_L55: requires N >= 1");
    if (jetalg::jet_order(f) > n)
        throw AlgebraError("reduce_L55: F has jet order above N");
    const DiffPoly theta = DiffPoly::atom(1, atom_odd(1, 0));
    const DiffPoly u = DiffPoly::atom(1, atom_even(1, 0));
    DiffPoly a = partial(f, atom_odd(1, 0));
    DiffPoly b = f - mul(theta, a);
    if (jetalg::jet_order(b) > n - 1)
        throw AlgebraError("reduce_L55: the theta-free part must have jet order <= N-1");
    if (!partial(a, atom_odd(1, n)).is_zero())
        throw AlgebraError("reduce_L55: A depends on theta^N");
    DiffPoly aN = partial(a, atom_even(1, n));
    if (jetalg::jet_order(aN) > n - 1)
        throw AlgebraError("reduce_L55: dA/du^N must have jet order <= N-1");
    const Atom lower = atom_even(1, n - 1);
    SecondReduction out;
    out.X = antiderivative(aN * Rat(2), lower);
    DiffPoly integrand = mul(u, partial(out.X, lower))
        - mul(theta, partial(out.X, atom_odd(1, n - 1))) * Rat(1, 2);
    out.Y = antiderivative(integrand, lower);
    return out;
}

} // namespace deform
