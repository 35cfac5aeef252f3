#pragma once
// Monomials of the graded term algebra: a strictly increasing list of odd
// atoms (sign normalized to +1 for this stored order) times a multiset of
// even atoms of jet order >= 1. Order-0 even variables live in the
// Coefficient, never here.

#include "jetalg/atom.hpp"

#include <cstdint>
#include <vector>

namespace jetalg {

struct Monomial {
    std::vector<Atom> odd;                          // sorted ascending, unique
    std::vector<std::pair<Atom, std::uint32_t>> even; // sorted by atom, exp >= 1

    bool operator==(const Monomial&) const = default;
};

int monomial_super_degree(const Monomial& m);
int monomial_standard_degree(const Monomial& m);
int monomial_max_order(const Monomial& m);     // -1 when no atoms at all

// Graded order: (super, standard) degrees first, then lexicographic content.
int monomial_cmp(const Monomial& a, const Monomial& b);

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return monomial_cmp(a, b) < 0; }
};

// Product sign from merging the odd lists: 0 if a repeated odd atom kills
// the product, otherwise +1/-1 with the merged monomial written to out.
int monomial_mul(const Monomial& a, const Monomial& b, Monomial& out);

} // namespace jetalg
