#pragma once
// Jet atoms u^{i,s} (even) and th_i^s (odd), packed into 32 bits so that the
// numeric order is (parity, component, order) — the canonical storage order
// for odd factors.

#include <cstdint>
#include <stdexcept>

namespace jetalg {

using Atom = std::uint32_t;

namespace atomdetail {
constexpr Atom kOddTag = Atom(1) << 31;
constexpr int kCompShift = 24;
constexpr Atom kOrderMask = (Atom(1) << kCompShift) - 1;
} // namespace atomdetail

inline Atom atom_even(int component, int order) {
    if (component < 1 || component > 127 || order < 0)
        throw std::invalid_argument("atom_even: bad component/order");
    return (Atom(component - 1) << atomdetail::kCompShift) | Atom(order);
}

inline Atom atom_odd(int component, int order) {
    return atomdetail::kOddTag | atom_even(component, order);
}

inline bool atom_is_odd(Atom a) { return (a & atomdetail::kOddTag) != 0; }
inline bool atom_is_even(Atom a) { return !atom_is_odd(a); }
inline int atom_component(Atom a) {
    return static_cast<int>((a & ~atomdetail::kOddTag) >> atomdetail::kCompShift) + 1;
}
inline int atom_order(Atom a) { return static_cast<int>(a & atomdetail::kOrderMask); }
inline Atom atom_raise(Atom a) { return a + 1; }

} // namespace jetalg
