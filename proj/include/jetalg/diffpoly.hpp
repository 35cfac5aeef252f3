#pragma once
// Graded differential polynomials: finitely many terms Monomial -> Coefficient
// over a fixed number of components n. Together with the total derivative,
// graded partials, gradations and antiderivatives this is the whole term
// algebra the variational calculus is built on.

#include "jetalg/coefficient.hpp"
#include "jetalg/errors.hpp"
#include "jetalg/monomial.hpp"

#include <climits>
#include <map>
#include <vector>

namespace jetalg {

inline constexpr int kValuationInfinity = INT_MAX;

struct GradingKey {
    int p; // super degree (odd atom count)
    int d; // standard degree (sum of jet orders)
    auto operator<=>(const GradingKey&) const = default;
};

class DiffPoly {
public:
    using TermMap = std::map<Monomial, Coefficient, MonomialLess>;

    explicit DiffPoly(int n = 1) : n_(n) {}
    static DiffPoly constant(int n, const Rat& c);
    static DiffPoly scalar(int n, const Coefficient& c);
    // Any jet atom as a polynomial; order-0 even atoms become coefficient vars.
    static DiffPoly atom(int n, Atom a);

    int components() const { return n_; }
    const TermMap& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    bool operator==(const DiffPoly& o) const { return n_ == o.n_ && t_ == o.t_; }

    Coefficient coefficient_of(const Monomial& m) const;
    void add_term(const Monomial& m, const Coefficient& c); // accumulate, prune zeros

private:
    int n_;
    TermMap t_;
};

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b);
DiffPoly operator-(const DiffPoly& a, const DiffPoly& b);
DiffPoly operator-(const DiffPoly& a);
DiffPoly mul(const DiffPoly& a, const DiffPoly& b);
inline DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) { return mul(a, b); }
DiffPoly operator*(const DiffPoly& a, const Rat& c);
DiffPoly operator*(const DiffPoly& a, const Coefficient& c);
DiffPoly dp_pow(const DiffPoly& a, unsigned e);

// Total x-derivative: sum over all atoms (and coefficient u-variables) of
// next-order atom times partial.
DiffPoly total_derivative(const DiffPoly& f);
DiffPoly total_derivative(const DiffPoly& f, int times);

// Graded partial derivative; left convention for odd atoms.
DiffPoly partial(const DiffPoly& f, Atom a);

std::map<GradingKey, DiffPoly> grade(const DiffPoly& f);
DiffPoly graded_piece(const DiffPoly& f, int p, int d);
DiffPoly standard_piece(const DiffPoly& f, int d);      // sum over p
DiffPoly standard_truncate(const DiffPoly& f, int dmax);
int valuation(const DiffPoly& f);                        // kValuationInfinity for 0
int super_degree_if_homogeneous(const DiffPoly& f);      // throws NonHomogeneousInput
bool is_bihomogeneous(const DiffPoly& f, int& p, int& d);
int jet_order(const DiffPoly& f);                        // -1 for f=0

DiffPoly antiderivative(const DiffPoly& f, Atom a);

// Simultaneous substitution atom -> polynomial (odd targets must be odd);
// coefficient u-variables are substituted when their order-0 atom is mapped.
DiffPoly subst(const DiffPoly& f, const std::map<Atom, DiffPoly>& images);

} // namespace jetalg
