#include "jetalg/scalarpoly.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace jetalg {

/******** variable packing ********/

namespace {
constexpr Var kSymTag = Var(1) << 63;
constexpr int kSymShift = 48;
} // namespace

Var uvar(int component) {
    if (component < 1) throw std::invalid_argument("uvar: component must be >= 1");
    return static_cast<Var>(component);
}

Var symjet(SymbolId s, const std::vector<int>& alpha) {
    if (alpha.size() > kMaxSymComponents)
        throw std::invalid_argument("symjet: too many components");
    Var a = 0;
    for (size_t j = 0; j < alpha.size(); ++j) {
        if (alpha[j] < 0 || alpha[j] > 255)
            throw std::invalid_argument("symjet: derivative order out of range");
        a |= Var(alpha[j]) << (8 * (kMaxSymComponents - 1 - j));
    }
    return kSymTag | (Var(s) << kSymShift) | a;
}

Var symjet1(SymbolId s, int order) { return symjet(s, {order}); }

bool var_is_uvar(Var v) { return (v & kSymTag) == 0; }
int uvar_component(Var v) { return static_cast<int>(v); }
bool var_is_symjet(Var v) { return (v & kSymTag) != 0; }
SymbolId symjet_symbol(Var v) { return static_cast<SymbolId>((v >> kSymShift) & 0x7fff); }

int symjet_order(Var v, int component) {
    return static_cast<int>((v >> (8 * (kMaxSymComponents - component))) & 0xff);
}

int symjet_total_order(Var v) {
    int s = 0;
    for (int j = 1; j <= kMaxSymComponents; ++j) s += symjet_order(v, j);
    return s;
}

Var symjet_raise(Var v, int component) {
    int cur = symjet_order(v, component);
    if (cur >= 255) throw std::runtime_error("symjet_raise: order overflow");
    return v + (Var(1) << (8 * (kMaxSymComponents - component)));
}

/******** monomials & canonical form ********/

int smono_cmp(const SMono& a, const SMono& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        if (a[i].v != b[i].v) return a[i].v < b[i].v ? -1 : 1;
        if (a[i].e != b[i].e) return a[i].e < b[i].e ? -1 : 1;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

namespace {

struct SMonoLess {
    bool operator()(const SMono& a, const SMono& b) const { return smono_cmp(a, b) < 0; }
};

ScalarPoly from_map(std::map<SMono, Rat, SMonoLess>&& m) {
    ScalarPoly p;
    p.t.reserve(m.size());
    for (auto& [mono, c] : m)
        if (c != 0) p.t.push_back({mono, c});
    return p;
}

SMono smono_mul(const SMono& a, const SMono& b) {
    SMono r;
    r.reserve(a.size() + b.size());
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].v == b[j].v) { r.push_back({a[i].v, a[i].e + b[j].e}); ++i; ++j; }
        else if (a[i].v < b[j].v) r.push_back(a[i++]);
        else r.push_back(b[j++]);
    }
    for (; i < a.size(); ++i) r.push_back(a[i]);
    for (; j < b.size(); ++j) r.push_back(b[j]);
    return r;
}

} // namespace

Rat ScalarPoly::constant_value() const {
    if (t.empty()) return Rat(0);
    if (t.size() != 1 || !t[0].first.empty())
        throw std::logic_error("constant_value: polynomial is not constant");
    return t[0].second;
}

ScalarPoly operator+(const ScalarPoly& a, const ScalarPoly& b) {
    ScalarPoly r;
    r.t.reserve(a.t.size() + b.t.size());
    size_t i = 0, j = 0;
    while (i < a.t.size() && j < b.t.size()) {
        int c = smono_cmp(a.t[i].first, b.t[j].first);
        if (c == 0) {
            Rat s = a.t[i].second + b.t[j].second;
            if (s != 0) r.t.push_back({a.t[i].first, s});
            ++i; ++j;
        } else if (c < 0) r.t.push_back(a.t[i++]);
        else r.t.push_back(b.t[j++]);
    }
    for (; i < a.t.size(); ++i) r.t.push_back(a.t[i]);
    for (; j < b.t.size(); ++j) r.t.push_back(b.t[j]);
    return r;
}

ScalarPoly operator-(const ScalarPoly& a) {
    ScalarPoly r = a;
    for (auto& [m, c] : r.t) c = -c;
    return r;
}

ScalarPoly operator-(const ScalarPoly& a, const ScalarPoly& b) { return a + (-b); }

ScalarPoly operator*(const ScalarPoly& a, const ScalarPoly& b) {
    std::map<SMono, Rat, SMonoLess> acc;
    for (const auto& [ma, ca] : a.t)
        for (const auto& [mb, cb] : b.t)
            acc[smono_mul(ma, mb)] += ca * cb;
    return from_map(std::move(acc));
}

ScalarPoly operator*(const ScalarPoly& a, const Rat& c) {
    if (c == 0) return {};
    ScalarPoly r = a;
    for (auto& [m, q] : r.t) q *= c;
    return r;
}

ScalarPoly sp_pow(const ScalarPoly& a, unsigned e) {
    ScalarPoly r{Rat(1)};
    ScalarPoly acc = a;
    for (unsigned k = e; k; k >>= 1) {
        if (k & 1) r = r * acc;
        if (k > 1) acc = acc * acc;
    }
    return r;
}

bool sp_contains_var(const ScalarPoly& a, Var v) {
    for (const auto& [m, c] : a.t)
        for (const auto& vp : m)
            if (vp.v == v) return true;
    return false;
}

int sp_degree_in(const ScalarPoly& a, Var v) {
    int d = 0;
    for (const auto& [m, c] : a.t)
        for (const auto& vp : m)
            if (vp.v == v) d = std::max<int>(d, vp.e);
    return d;
}

std::vector<Var> sp_vars(const ScalarPoly& a) {
    std::vector<Var> vs;
    for (const auto& [m, c] : a.t)
        for (const auto& vp : m) vs.push_back(vp.v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

/******** calculus on scalar variables ********/

ScalarPoly sp_partial(const ScalarPoly& a, Var v) {
    ScalarPoly r;
    std::map<SMono, Rat, SMonoLess> acc;
    for (const auto& [m, c] : a.t) {
        for (size_t k = 0; k < m.size(); ++k) {
            if (m[k].v != v) continue;
            SMono dm = m;
            Rat dc = c * Rat(m[k].e);
            if (dm[k].e == 1) dm.erase(dm.begin() + k);
            else dm[k].e -= 1;
            acc[dm] += dc;
            break;
        }
    }
    return from_map(std::move(acc));
}

ScalarPoly sp_derive_u(const ScalarPoly& a, int component) {
    std::map<SMono, Rat, SMonoLess> acc;
    for (const auto& [m, c] : a.t) {
        for (size_t k = 0; k < m.size(); ++k) {
            Var v = m[k].v;
            Var dv;
            if (var_is_uvar(v)) {
                if (uvar_component(v) != component) continue;
                dv = 0; // exponent rule only
            } else {
                dv = symjet_raise(v, component);
            }
            SMono dm = m;
            Rat dc = c * Rat(m[k].e);
            if (dm[k].e == 1) dm.erase(dm.begin() + k);
            else dm[k].e -= 1;
            if (dv != 0) {
                // insert the raised jet, keeping the sorted invariant
                SMono prod = smono_mul(dm, SMono{{dv, 1}});
                acc[prod] += dc;
            } else {
                acc[dm] += dc;
            }
        }
    }
    return from_map(std::move(acc));
}

ScalarPoly sp_at_zero(const ScalarPoly& a, Var v) {
    ScalarPoly r;
    for (const auto& [m, c] : a.t) {
        bool has = false;
        for (const auto& vp : m)
            if (vp.v == v) { has = true; break; }
        if (!has) r.t.push_back({m, c});
    }
    return r;
}

ScalarPoly sp_antiderivative(const ScalarPoly& a, Var v) {
    std::map<SMono, Rat, SMonoLess> acc;
    for (const auto& [m, c] : a.t) {
        SMono im = m;
        bool bumped = false;
        for (auto& vp : im) {
            if (vp.v == v) { vp.e += 1; acc[im] += c / Rat(vp.e); bumped = true; break; }
        }
        if (!bumped) {
            SMono prod = smono_mul(m, SMono{{v, 1}});
            acc[prod] += c;
        }
    }
    return from_map(std::move(acc));
}

/******** exact division and gcd ********/

namespace {

// Coefficient vector of a in v, index = exponent; coefficients exclude v.
std::vector<ScalarPoly> coeffs_in(const ScalarPoly& a, Var v) {
    std::vector<ScalarPoly> cs(static_cast<size_t>(sp_degree_in(a, v)) + 1);
    for (const auto& [m, c] : a.t) {
        SMono rest;
        unsigned e = 0;
        for (const auto& vp : m) {
            if (vp.v == v) e = vp.e;
            else rest.push_back(vp);
        }
        ScalarPoly term;
        term.t.push_back({rest, c});
        cs[e] = cs[e] + term;
    }
    return cs;
}

ScalarPoly assemble_in(const std::vector<ScalarPoly>& cs, Var v) {
    ScalarPoly r;
    for (size_t e = 0; e < cs.size(); ++e) {
        ScalarPoly pw;
        if (e == 0) pw = cs[e];
        else pw = cs[e] * sp_pow(ScalarPoly::variable(v), static_cast<unsigned>(e));
        r = r + pw;
    }
    return r;
}

int true_degree(const std::vector<ScalarPoly>& cs) {
    for (int k = static_cast<int>(cs.size()) - 1; k >= 0; --k)
        if (!cs[k].is_zero()) return k;
    return -1;
}

} // namespace

std::optional<ScalarPoly> sp_divexact(const ScalarPoly& a, const ScalarPoly& b) {
    if (b.is_zero()) return std::nullopt;
    if (a.is_zero()) return ScalarPoly{};
    if (b.is_constant()) {
        Rat inv = 1 / b.constant_value();
        return a * inv;
    }
    Var x = b.t.back().first.front().v;
    for (const auto& [m, c] : b.t)
        for (const auto& vp : m) x = std::min(x, vp.v);
    auto ac = coeffs_in(a, x);
    auto bc = coeffs_in(b, x);
    int da = true_degree(ac), db = true_degree(bc);
    if (da < db) return std::nullopt;
    std::vector<ScalarPoly> q(static_cast<size_t>(da - db) + 1);
    for (int k = da - db; k >= 0; --k) {
        auto qk = sp_divexact(ac[static_cast<size_t>(db + k)], bc[static_cast<size_t>(db)]);
        if (!qk) return std::nullopt;
        q[static_cast<size_t>(k)] = *qk;
        for (int j = 0; j <= db; ++j)
            ac[static_cast<size_t>(j + k)] = ac[static_cast<size_t>(j + k)] - *qk * bc[static_cast<size_t>(j)];
    }
    for (const auto& r : ac)
        if (!r.is_zero()) return std::nullopt;
    return assemble_in(q, x);
}

Rat sp_rational_content(const ScalarPoly& a) {
    if (a.is_zero()) return Rat(1);
    mpz_class g = 0, l = 1;
    for (const auto& [m, c] : a.t) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num().get_mpz_t());
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den().get_mpz_t());
    }
    Rat content(g, l);
    content.canonicalize();
    if (a.t[0].second < 0) content = -content;
    return content;
}

namespace {

ScalarPoly sp_normalize_primitive(const ScalarPoly& a) {
    if (a.is_zero()) return a;
    return a * (1 / sp_rational_content(a));
}

ScalarPoly content_in(const ScalarPoly& a, Var x) {
    auto cs = coeffs_in(a, x);
    ScalarPoly g;
    for (const auto& c : cs)
        if (!c.is_zero()) g = sp_gcd(g, c);
    return g;
}

// Pseudo-remainder of a by b in x (up to a unit; caller takes primitive part).
ScalarPoly prem_in(std::vector<ScalarPoly> r, const std::vector<ScalarPoly>& b, Var x) {
    int db = true_degree(b);
    const ScalarPoly& lb = b[static_cast<size_t>(db)];
    int dr = true_degree(r);
    while (dr >= db) {
        ScalarPoly lr = r[static_cast<size_t>(dr)];
        // r <- lb*r - lr*x^{dr-db}*b
        std::vector<ScalarPoly> nr(static_cast<size_t>(dr), ScalarPoly{});
        if (nr.size() < r.size()) nr.resize(r.size());
        for (int j = 0; j < dr; ++j)
            nr[static_cast<size_t>(j)] = r[static_cast<size_t>(j)] * lb;
        for (int j = 0; j < db; ++j) {
            size_t idx = static_cast<size_t>(j + dr - db);
            nr[idx] = nr[idx] - lr * b[static_cast<size_t>(j)];
        }
        r = std::move(nr);
        dr = true_degree(r);
    }
    return assemble_in(r, x);
}

} // namespace

ScalarPoly sp_gcd(const ScalarPoly& a, const ScalarPoly& b) {
    if (a.is_zero()) return sp_normalize_primitive(b);
    if (b.is_zero()) return sp_normalize_primitive(a);
    if (a.is_constant() || b.is_constant()) return ScalarPoly{Rat(1)};
    auto va = sp_vars(a), vb = sp_vars(b);
    std::vector<Var> common;
    std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
    if (common.empty()) return ScalarPoly{Rat(1)};
    Var x = common.front();
    ScalarPoly ca = content_in(a, x), cb = content_in(b, x);
    ScalarPoly c = sp_gcd(ca, cb);
    ScalarPoly ap = *sp_divexact(a, ca);
    ScalarPoly bp = *sp_divexact(b, cb);
    auto acs = coeffs_in(ap, x), bcs = coeffs_in(bp, x);
    if (true_degree(acs) < true_degree(bcs)) std::swap(acs, bcs);
    while (true) {
        if (true_degree(bcs) == 0) return sp_normalize_primitive(c);
        ScalarPoly r = prem_in(acs, bcs, x);
        if (r.is_zero()) {
            ScalarPoly g = assemble_in(bcs, x);
            return sp_normalize_primitive(c * *sp_divexact(g, content_in(g, x)));
        }
        ScalarPoly rp = *sp_divexact(r, content_in(r, x));
        acs = std::move(bcs);
        bcs = coeffs_in(rp, x);
    }
}

} // namespace jetalg
