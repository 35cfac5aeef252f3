#pragma once
// Canonical ASCII rendering (the same syntax the DSL parser reads):
// terms in graded map order, factors as rational * scalar vars * even jets *
// odd jets, powers with ^. Scalar shorthands (u1, th2) are used when n=1.

#include "jetalg/diffpoly.hpp"

#include <string>

namespace jetalg {

std::string atom_text(int n, Atom a);
std::string var_text(Var v);
std::string to_text(const ScalarPoly& p);
std::string to_text(const Coefficient& c);
std::string to_text(const DiffPoly& f);

} // namespace jetalg
