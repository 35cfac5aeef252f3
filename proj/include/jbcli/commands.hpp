#pragma once
// Command layer for jbcli: operand resolution (declaration files, built-in
// fixtures, inline expressions), the Report structure with matching text and
// JSON renderings, and the argv-level dispatcher.
//
// Operands of value commands resolve in this order:
//   1. a name declared in the file passed with --file;
//   2. a fixture member: dkdv.P1, kdv.P2, ch.P1, deformed(<c-expr>,<order>).P2;
//   3. an inline expression in the DSL (functionals must be written int(...)).
// The function symbol `c` is always in scope for inline expressions.
//
// Exit codes: 0 when every verdict passes, 1 on a verdict failure, 2 on
// usage, parse, or algebra-precondition errors.

#include "jbcli/dsl.hpp"
#include "structures/structures.hpp"
#include "varcalc/varcalc.hpp"

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace jbcli {

struct Report {
    std::string command; // echo of the invoked command and operands
    std::vector<std::pair<std::string, bool>> verdicts;
    std::vector<std::pair<std::string, std::string>> fields; // rendered values
    long long millis = 0;

    bool pass() const;
    void field(std::string name, std::string value);
    void verdict(std::string name, bool ok);

    std::string text(bool withTiming = true) const; // fields with empty names print bare
    std::string json_text() const;                  // same verdict data, machine-readable
};

// The scope used to resolve operands: the --file declarations (if any) with
// the function symbol "c" always present.
SourceFile command_scope(const std::string& filePath);

varcalc::LocalFunctional resolve_functional(const std::string& operand,
    const SourceFile& scope);
structures::PoissonPair resolve_pair(const std::string& operand,
    const SourceFile& scope);
jetalg::Coefficient resolve_central_invariant(const std::string& operand,
    const SourceFile& scope);

std::string render_functional(const varcalc::LocalFunctional& f);

// Full command dispatch; writes the report to `out`, errors to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace jbcli
