#pragma once
// Process-wide registry of function symbols (c, f, g, ...). A symbol stands
// for a smooth function of the order-0 field variables u^1..u^n; only its
// derivative jets ever appear in coefficients. Registration is idempotent
// and guarded for concurrent readers/writers.

#include <cstdint>
#include <string>
#include <vector>

namespace jetalg {

using SymbolId = std::uint16_t;

SymbolId register_symbol(const std::string& name);
bool symbol_registered(const std::string& name);
SymbolId symbol_id(const std::string& name);        // throws if unknown
const std::string& symbol_name(SymbolId id);

} // namespace jetalg
