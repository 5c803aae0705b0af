#pragma once

// Supersingular j-invariants in characteristic p.

#include <algorithm>
#include <cstdint>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "modular.hpp"

namespace fibercurve {

struct SupersingularData {
    std::uint32_t p = 0;
    std::uint64_t s = 0;
    bool j0 = false;
    bool j1728 = false;
    /// Automorphism order e per supersingular point, ascending.
    std::vector<int> e;

    friend bool operator==(const SupersingularData&, const SupersingularData&) = default;
};

inline std::uint64_t genus_x0(std::uint64_t p) {
    require_prime(p);
    switch (p % 12) {
    case 1: return (p - 13) / 12;
    case 5: return (p - 5) / 12;
    case 7: return (p - 7) / 12;
    default: return (p + 1) / 12;
    }
}

inline SupersingularData supersingular_data(std::uint64_t p) {
    SupersingularData d;
    d.p = static_cast<std::uint32_t>(p);
    d.s = genus_x0(p) + 1;
    d.j0 = p % 3 == 2;
    d.j1728 = p % 4 == 3;
    const std::uint64_t generic = d.s - (d.j0 ? 1 : 0) - (d.j1728 ? 1 : 0);
    d.e.assign(generic, 1);
    if (d.j1728) d.e.push_back(2);
    if (d.j0) d.e.push_back(3);
    return d;
}

inline constexpr std::uint64_t kMaxSupersingularOracle = 1000;

/// Supersingular j in F_{p^2} found by point counting, by canonical index.
/// Each j is tested on one curve with that invariant: y^2 = x^3 + 1 (j = 0),
/// y^2 = x^3 + x (j = 1728), else y^2 = x^3 + 3k x + 2k with k = j/(1728 - j).
inline std::vector<Fq> supersingular_j_bruteforce(std::uint64_t p) {
    if (p > kMaxSupersingularOracle) throw bound_error("supersingular oracle limited to p <= 1000");
    require_prime(p);
    const Field F = Field::create(p, 2);
    const auto elems = F.elements();
    const std::uint64_t q = F.order();
    // Raw coordinate arithmetic: z = c0 + c1 x with x^2 = -f0 - f1 x.
    const auto f = F.defining_polynomial();
    const std::uint64_t r0 = (p - f[0]) % p, r1 = (p - f[1]) % p;
    struct Pair {
        std::uint64_t c0, c1;
    };
    auto mul = [&](Pair a, Pair b) {
        const std::uint64_t hi = a.c1 * b.c1 % p;
        return Pair{(a.c0 * b.c0 + hi * r0) % p, (a.c0 * b.c1 + a.c1 * b.c0 + hi * r1) % p};
    };
    auto pair_of = [](const Fq& z) { return Pair{z.coord(0), z.coord(1)}; };
    // chi[i] = quadratic character of the element with index i.
    std::vector<int> chi(q, -1);
    chi[0] = 0;
    std::vector<Pair> cubes;
    cubes.reserve(q);
    for (const auto& x : elems) {
        const Pair z = pair_of(x);
        const Pair z2 = mul(z, z);
        if (!x.is_zero()) chi[z2.c0 * p + z2.c1] = 1;
        cubes.push_back(mul(z2, z));
    }

    // Elements are enumerated as c0 + c1 x with c1 fastest, so A(c0 + c1 x)
    // advances by the constant A x along each row.
    const Pair X{0, 1};
    auto add = [&](std::uint64_t a, std::uint64_t b) {
        const std::uint64_t r = a + b;
        return r >= p ? r - p : r;
    };
    auto trace = [&](const Fq& Aq, const Fq& Bq) {
        const Pair A = pair_of(Aq), B = pair_of(Bq);
        const Pair Ax = mul(A, X);
        std::int64_t sum = 0;
        std::size_t i = 0;
        for (std::uint64_t c0 = 0; c0 < p; ++c0) {
            Pair ax = mul(A, Pair{c0, 0});
            ax.c0 = add(ax.c0, B.c0);
            ax.c1 = add(ax.c1, B.c1);
            for (std::uint64_t c1 = 0; c1 < p; ++c1, ++i) {
                sum += chi[add(cubes[i].c0, ax.c0) * p + add(cubes[i].c1, ax.c1)];
                ax.c0 = add(ax.c0, Ax.c0);
                ax.c1 = add(ax.c1, Ax.c1);
            }
        }
        // #E = q + 1 + sum, so t = -sum.
        return -sum;
    };

    std::vector<Fq> out;
    const Fq c1728 = F.from_int(1728);
    for (const auto& j : elems) {
        // j and j^p are supersingular together; test the smaller of the pair.
        const Fq jp = j.frobenius();
        if (jp < j) continue;
        Fq A, B;
        if (j.is_zero()) {
            A = F.zero();
            B = F.one();
        } else if (j == c1728) {
            A = F.one();
            B = F.zero();
        } else {
            const Fq k = j / (c1728 - j);
            A = k.scaled(3);
            B = k.scaled(2);
        }
        const std::int64_t t = trace(A, B);
        if (t % static_cast<std::int64_t>(p) == 0) {
            out.push_back(j);
            if (jp != j) out.push_back(jp);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Same record as supersingular_data, derived only from the brute-force list.
inline SupersingularData supersingular_data_bruteforce(std::uint64_t p) {
    const auto js = supersingular_j_bruteforce(p);
    const Field F = Field::create(p, 2);
    SupersingularData d;
    d.p = static_cast<std::uint32_t>(p);
    d.s = js.size();
    for (const auto& j : js) {
        if (j.is_zero()) d.j0 = true;
        if (j == F.from_int(1728)) d.j1728 = true;
    }
    for (const auto& j : js) d.e.push_back(j.is_zero() ? 3 : j == F.from_int(1728) ? 2 : 1);
    std::sort(d.e.begin(), d.e.end());
    return d;
}

} // namespace fibercurve
