#pragma once

// Exceptional subgroups A4, S4, A5 of PSL_2(F_p) and their orbit tables on P^1(F_p).
//
// Groups act through the transposes of the classical SL_2 generators.  With
// that convention the printed orbit sets at p = 13, 73, 421 come out exactly
// with the smallest roots of unity / square roots.

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "modular.hpp"
#include "projective.hpp"

namespace fibercurve {

enum class ExceptionalKind { A4, S4, A5 };

inline std::string to_string(ExceptionalKind k) {
    switch (k) {
    case ExceptionalKind::A4: return "A4";
    case ExceptionalKind::S4: return "S4";
    case ExceptionalKind::A5: return "A5";
    }
    return "?";
}

inline ExceptionalKind parse_exceptional_kind(const std::string& s) {
    if (s == "a4" || s == "A4") return ExceptionalKind::A4;
    if (s == "s4" || s == "S4") return ExceptionalKind::S4;
    if (s == "a5" || s == "A5") return ExceptionalKind::A5;
    throw precondition_error("unknown exceptional group '" + s + "'");
}

inline std::size_t exceptional_order(ExceptionalKind k) {
    switch (k) {
    case ExceptionalKind::A4: return 12;
    case ExceptionalKind::S4: return 24;
    case ExceptionalKind::A5: return 60;
    }
    return 0;
}

inline bool exceptional_admissible(ExceptionalKind k, std::uint64_t p) {
    switch (k) {
    case ExceptionalKind::A4: return true;
    case ExceptionalKind::S4: return p % 8 == 1 || p % 8 == 7;
    case ExceptionalKind::A5: return p % 5 == 1 || p % 5 == 4;
    }
    return false;
}

inline void require_exceptional(ExceptionalKind k, std::uint64_t p) {
    require_prime(p);
    if (exceptional_admissible(k, p)) return;
    if (k == ExceptionalKind::S4) throw precondition_error("S4 requires p ≡ ±1 mod 8");
    throw precondition_error("A5 requires p ≡ ±1 mod 5");
}

/// One row of the closed-form orbit tables: N_p = (p + offset) / modulus and
/// the labels of the exceptional orbits that lie in P^1(F_p).
struct OrbitTableRow {
    std::uint32_t modulus;
    std::uint32_t residue;
    std::uint32_t offset;
    std::vector<std::string> exceptional;

    std::uint64_t orbit_count(std::uint64_t p) const { return (p + offset) / modulus; }
};

inline OrbitTableRow orbit_table_row(ExceptionalKind k, std::uint64_t p) {
    static const std::vector<OrbitTableRow> a4 = {
        {12, 1, 23, {"O2", "O3,1", "O3,2"}}, {12, 5, 7, {"O2"}}, {12, 7, 17, {"O3,1", "O3,2"}}, {12, 11, 1, {}}};
    static const std::vector<OrbitTableRow> s4 = {
        {24, 1, 47, {"O2", "O3", "O4"}}, {24, 5, 19, {"O4"}},     {24, 7, 17, {"O3"}},       {24, 11, 13, {"O2"}},
        {24, 13, 35, {"O3", "O4"}},      {24, 17, 31, {"O2", "O4"}}, {24, 19, 5, {"O2", "O3"}}, {24, 23, 1, {}}};
    static const std::vector<OrbitTableRow> a5 = {
        {60, 1, 119, {"O2", "O3", "O5"}}, {60, 11, 49, {"O5"}},      {60, 19, 41, {"O3"}},      {60, 29, 31, {"O2"}},
        {60, 31, 89, {"O3", "O5"}},       {60, 41, 79, {"O2", "O5"}}, {60, 49, 71, {"O2", "O3"}}, {60, 59, 1, {}}};
    const auto& rows = k == ExceptionalKind::A4 ? a4 : k == ExceptionalKind::S4 ? s4 : a5;
    for (const auto& r : rows)
        if (p % r.modulus == r.residue) return r;
    throw precondition_error(to_string(k) + ": no table row for p = " + std::to_string(p));
}

namespace detail {

inline std::vector<std::uint32_t> roots_of_unity(std::uint32_t p, std::uint32_t n) {
    // Primitive n-th roots of unity in F_p, ascending.
    std::vector<std::uint32_t> out;
    const Modulus mod(p);
    for (std::uint32_t x = 2; x < p; ++x) {
        std::uint32_t y = 1;
        std::uint32_t order = 0;
        for (std::uint32_t i = 1; i <= n; ++i) {
            y = mod.mul(y, x);
            if (y == 1) {
                order = i;
                break;
            }
        }
        if (order == n) out.push_back(x);
    }
    return out;
}

inline std::uint32_t sqrt_mod(std::uint32_t p, std::int64_t a) {
    const Field F = Field::create(p);
    auto r = sqrt_in_field(F.from_int(a));
    require(r.has_value(), std::to_string(a) + " is not a square mod " + std::to_string(p));
    return r->residue();
}

inline std::optional<SubgroupTable> try_generate(const std::vector<ProjTransform>& gens, std::size_t target) {
    try {
        SubgroupTable t = generate_subgroup(gens, target);
        if (t.order() == target) return t;
    } catch (const bound_error&) {
    }
    return std::nullopt;
}

struct TraceCriterion {
    std::vector<std::uint32_t> ts, tt, tst;
    std::vector<std::uint32_t> fricke;
};

inline TraceCriterion trace_criterion(ExceptionalKind k, std::uint32_t p) {
    const Modulus mod(p);
    TraceCriterion c;
    auto pm = [&](std::vector<std::uint32_t> base) {
        std::vector<std::uint32_t> out;
        for (auto v : base) {
            out.push_back(v);
            out.push_back(mod.neg(v));
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    switch (k) {
    case ExceptionalKind::A4:
        c.ts = pm({1});
        c.tt = {0};
        c.tst = pm({1});
        break;
    case ExceptionalKind::S4: {
        const std::uint32_t r2 = sqrt_mod(p, 2);
        c.ts = c.tt = c.tst = pm({0, 1, r2});
        c.fricke = {3};
        break;
    }
    case ExceptionalKind::A5: {
        const std::uint32_t r5 = sqrt_mod(p, 5);
        const std::uint32_t mu = mod.mul(mod.add(1, r5), mod.inv(2));
        const std::uint32_t mu_inv = mod.inv(mu);
        c.ts = c.tt = c.tst = pm({0, 1, mu, mu_inv});
        c.fricke = {mod.add(2, mu), 3, mod.sub(2, mu_inv)};
        break;
    }
    }
    return c;
}

inline SubgroupTable from_sl2_generators(std::uint32_t p, std::array<std::int64_t, 4> s, std::array<std::int64_t, 4> t) {
    std::vector<ProjTransform> gens{ProjTransform(p, s[0], s[1], s[2], s[3]).transpose(),
                                    ProjTransform(p, t[0], t[1], t[2], t[3]).transpose()};
    return generate_subgroup(gens);
}

/// First (S, T) in SL_2(F_p), S a companion matrix and T scanned
/// lexicographically, whose traces meet the criterion and which generate a
/// group of the target order.
inline SubgroupTable scan_exceptional(ExceptionalKind k, std::uint32_t p) {
    const Modulus mod(p);
    const auto crit = trace_criterion(k, p);
    const std::size_t target = exceptional_order(k);
    auto in = [](const std::vector<std::uint32_t>& v, std::uint32_t x) {
        return std::find(v.begin(), v.end(), x) != v.end();
    };
    for (auto ts : crit.ts) {
        const std::array<std::uint32_t, 4> S{0, mod.neg(1), 1, ts};
        for (auto tt : crit.tt) {
            for (std::uint32_t a = 0; a < p; ++a) {
                const std::uint32_t d = mod.sub(tt, a);
                const std::uint32_t bc = mod.sub(mod.mul(a, d), 1);
                for (std::uint32_t b = 0; b < p; ++b) {
                    std::vector<std::uint32_t> cs;
                    if (b == 0) {
                        if (bc != 0) continue;
                        for (std::uint32_t c = 0; c < p; ++c) cs.push_back(c);
                    } else {
                        cs.push_back(mod.mul(bc, mod.inv(b)));
                    }
                    for (auto c : cs) {
                        // trace of S*T with S = [[0,-1],[1,ts]]
                        const std::uint32_t tst = mod.add(mod.neg(c), mod.add(b, mod.mul(ts, d)));
                        if (!in(crit.tst, tst)) continue;
                        if (!crit.fricke.empty()) {
                            std::uint32_t f = mod.add(mod.add(mod.mul(ts, ts), mod.mul(tt, tt)), mod.mul(tst, tst));
                            f = mod.sub(f, mod.mul(mod.mul(ts, tt), tst));
                            if (!in(crit.fricke, f)) continue;
                        }
                        std::vector<ProjTransform> gens{ProjTransform(p, S[0], S[1], S[2], S[3]).transpose(),
                                                        ProjTransform(p, a, b, c, d).transpose()};
                        if (auto g = try_generate(gens, target)) return *g;
                    }
                }
            }
        }
    }
    throw verification_error("no " + to_string(k) + " generator pair found at p = " + std::to_string(p));
}

} // namespace detail

/// Projective image of the exceptional group, of order 12 / 24 / 60.
inline SubgroupTable build_exceptional(ExceptionalKind k, std::uint64_t p64) {
    require_exceptional(k, p64);
    const auto p = static_cast<std::uint32_t>(p64);
    std::optional<SubgroupTable> g;
    if (k == ExceptionalKind::A4 && p % 3 == 1) {
        const std::int64_t z = detail::roots_of_unity(p, 3).front();
        g = detail::from_sl2_generators(p, {z, 0, -1, z * z}, {0, -1, 1, 0});
    } else if (k == ExceptionalKind::S4 && p % 8 == 1) {
        const std::int64_t r2 = detail::sqrt_mod(p, 2);
        const std::int64_t i = detail::sqrt_mod(p, -1);
        g = detail::from_sl2_generators(p, {r2, 1, -1, 0}, {1, i, i, 0});
    } else if (k == ExceptionalKind::A5 && p == 421) {
        g = detail::from_sl2_generators(p, {211, 196, 316, 100}, {100, 70, 306, 210});
    } else {
        g = detail::scan_exceptional(k, p);
    }
    detail::verify(g->order() == exceptional_order(k),
                   to_string(k) + " generators produced a group of order " + std::to_string(g->order()));
    for (const auto& h : g->elements()) detail::verify(h.in_psl2(), to_string(k) + " element outside PSL_2");
    return *g;
}

struct OrbitTableEntry {
    Orbit orbit;
    std::string label; // "O2", "O3,1", ... for exceptional orbits, empty otherwise
};

struct OrbitTable {
    ExceptionalKind kind;
    std::uint32_t p;
    std::vector<OrbitTableEntry> entries;
    std::uint64_t orbit_count;
    std::vector<std::string> exceptional; // labels present, in table order

    std::vector<Orbit> orbits() const {
        std::vector<Orbit> o;
        for (const auto& e : entries) o.push_back(e.orbit);
        return o;
    }
    bool has(const std::string& label) const {
        return std::find(exceptional.begin(), exceptional.end(), label) != exceptional.end();
    }
};

namespace detail {

inline std::size_t projective_order(const ProjTransform& g) {
    ProjTransform x = g;
    std::size_t n = 1;
    while (!x.is_identity()) {
        x = x * g;
        ++n;
    }
    return n;
}

} // namespace detail

/// Orbit decomposition of P^1(F_p) under the exceptional group, checked
/// against the closed-form table row for p.  Isotropy groups of exceptional
/// orbits are checked to be cyclic.
inline OrbitTable orbit_table(ExceptionalKind k, std::uint64_t p, const SubgroupTable& H) {
    OrbitTable t{k, static_cast<std::uint32_t>(p), {}, 0, {}};
    int three_count = 0;
    for (auto& o : orbits(H)) {
        OrbitTableEntry e{std::move(o), ""};
        if (e.orbit.isotropy > 1) {
            if (k == ExceptionalKind::A4 && e.orbit.isotropy == 3) {
                e.label = ++three_count == 1 ? "O3,1" : "O3,2";
            } else {
                e.label = "O" + std::to_string(e.orbit.isotropy);
            }
            const ProjPoint P = e.orbit.representative();
            bool cyclic = false;
            for (const auto& h : H.elements()) {
                if (act(h, P) == P && detail::projective_order(h) == e.orbit.isotropy) {
                    cyclic = true;
                    break;
                }
            }
            detail::verify(cyclic, to_string(k) + ": isotropy group of " + e.label + " is not cyclic");
        }
        t.entries.push_back(std::move(e));
    }
    t.orbit_count = t.entries.size();

    const auto row = orbit_table_row(k, p);
    for (const auto& label : row.exceptional) {
        for (const auto& e : t.entries)
            if (e.label == label) {
                t.exceptional.push_back(label);
                break;
            }
    }
    std::size_t labelled = 0;
    for (const auto& e : t.entries)
        if (!e.label.empty()) ++labelled;
    detail::verify(t.orbit_count == row.orbit_count(p),
                   to_string(k) + " at p = " + std::to_string(p) + ": " + std::to_string(t.orbit_count) +
                       " orbits, table gives " + std::to_string(row.orbit_count(p)));
    detail::verify(t.exceptional == row.exceptional && labelled == row.exceptional.size(),
                   to_string(k) + " at p = " + std::to_string(p) + ": exceptional orbits disagree with table");
    return t;
}

inline OrbitTable orbit_table(ExceptionalKind k, std::uint64_t p) { return orbit_table(k, p, build_exceptional(k, p)); }

} // namespace fibercurve
