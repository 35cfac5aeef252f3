#include "jetalg/interner.hpp"

#include <map>
#include <mutex>
#include <shared_mutex>
#include <stdexcept>

namespace jetalg {

namespace {
std::shared_mutex g_mutex;
std::vector<std::string> g_names;
std::map<std::string, SymbolId> g_ids;
} // namespace

SymbolId register_symbol(const std::string& name) {
    {
        std::shared_lock lk(g_mutex);
        auto it = g_ids.find(name);
        if (it != g_ids.end()) return it->second;
    }
    std::unique_lock lk(g_mutex);
    auto it = g_ids.find(name);
    if (it != g_ids.end()) return it->second;
    if (g_names.size() >= 0x7fff) throw std::runtime_error("symbol table full");
    SymbolId id = static_cast<SymbolId>(g_names.size());
    g_names.push_back(name);
    g_ids.emplace(name, id);
    return id;
}

bool symbol_registered(const std::string& name) {
    std::shared_lock lk(g_mutex);
    return g_ids.count(name) != 0;
}

SymbolId symbol_id(const std::string& name) {
    std::shared_lock lk(g_mutex);
    auto it = g_ids.find(name);
    if (it == g_ids.end()) throw std::runtime_error("unknown function symbol: " + name);
    return it->second;
}

const std::string& symbol_name(SymbolId id) {
    std::shared_lock lk(g_mutex);
    return g_names.at(id);
}

} // namespace jetalg
