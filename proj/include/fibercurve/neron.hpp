#pragma once

// Component groups of Neron models as critical groups of subdivided dual graphs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include "atlas.hpp"
#include "error.hpp"

namespace fibercurve {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

inline constexpr std::size_t kMaxSubdividedVertices = 2'000'000;

struct MetrizedEdge {
    std::size_t u = 0, v = 0;
    std::uint64_t length = 1;
};

struct MetrizedGraph {
    std::vector<std::string> vertices;
    std::vector<MetrizedEdge> edges;

    std::size_t add_vertex(std::string name) {
        vertices.push_back(std::move(name));
        return vertices.size() - 1;
    }
    void add_edge(std::size_t u, std::size_t v, std::uint64_t length) {
        detail::require(u < vertices.size() && v < vertices.size(), "edge endpoint out of range");
        detail::require(length >= 1, "edge lengths must be positive");
        edges.push_back({u, v, length});
    }
    bool connected() const {
        if (vertices.empty()) return true;
        std::vector<std::size_t> parent(vertices.size());
        std::iota(parent.begin(), parent.end(), 0);
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        std::size_t comps = vertices.size();
        for (const auto& e : edges)
            if (find(e.u) != find(e.v)) {
                parent[find(e.u)] = find(e.v);
                --comps;
            }
        return comps == 1;
    }
};

/// Dual graph of a special fiber, widths as lengths.
inline MetrizedGraph metrized_graph(const FiberGraph& g) {
    detail::require(g.incidence_specified, "edge incidence of " + to_string(g.family) + " fibers is unspecified");
    MetrizedGraph m;
    for (const auto& v : g.vertices) m.add_vertex(v.name);
    for (const auto& e : g.edges) m.add_edge(e.from, e.to, e.width);
    return m;
}

/// Each edge of length w becomes a path of w unit edges.
inline MetrizedGraph subdivide(const MetrizedGraph& g) {
    std::uint64_t total = g.vertices.size();
    for (const auto& e : g.edges) total += e.length - 1;
    if (total > kMaxSubdividedVertices)
        throw bound_error("subdivided graph would have " + std::to_string(total) + " vertices");
    MetrizedGraph out;
    out.vertices = g.vertices;
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        std::size_t prev = e.u;
        for (std::uint64_t i = 1; i < e.length; ++i) {
            const std::size_t mid = out.add_vertex("e" + std::to_string(k) + "." + std::to_string(i));
            out.add_edge(prev, mid, 1);
            prev = mid;
        }
        out.add_edge(prev, e.v, 1);
    }
    return out;
}

struct AbelianInvariants {
    std::vector<BigInt> factors; // d_1 | d_2 | ..., each >= 2

    BigInt order() const {
        BigInt n = 1;
        for (const auto& d : factors) n *= d;
        return n;
    }
    bool trivial() const { return factors.empty(); }
    std::string to_string() const {
        if (factors.empty()) return "trivial";
        std::string s;
        for (const auto& d : factors) s += (s.empty() ? "" : " x ") + ("Z/" + d.str());
        return s;
    }
    friend bool operator==(const AbelianInvariants&, const AbelianInvariants&) = default;
};

inline AbelianInvariants make_invariants(const std::vector<std::uint64_t>& v) {
    AbelianInvariants a;
    for (auto x : v) a.factors.emplace_back(x);
    return a;
}

inline nlohmann::ordered_json to_json(const AbelianInvariants& a) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& d : a.factors) {
        if (d <= std::numeric_limits<std::uint64_t>::max()) arr.push_back(d.convert_to<std::uint64_t>());
        else arr.push_back(d.str());
    }
    return arr;
}

namespace detail {

struct Overflow {};

/// int64 that throws Overflow instead of wrapping.
class CheckedInt64 {
public:
    CheckedInt64(std::int64_t v = 0) : v_(v) {}
    std::int64_t value() const { return v_; }

    friend CheckedInt64 operator+(CheckedInt64 a, CheckedInt64 b) {
        std::int64_t r;
        if (__builtin_add_overflow(a.v_, b.v_, &r)) throw Overflow{};
        return r;
    }
    friend CheckedInt64 operator-(CheckedInt64 a, CheckedInt64 b) {
        std::int64_t r;
        if (__builtin_sub_overflow(a.v_, b.v_, &r)) throw Overflow{};
        return r;
    }
    friend CheckedInt64 operator*(CheckedInt64 a, CheckedInt64 b) {
        std::int64_t r;
        if (__builtin_mul_overflow(a.v_, b.v_, &r)) throw Overflow{};
        return r;
    }
    friend CheckedInt64 operator/(CheckedInt64 a, CheckedInt64 b) {
        if (a.v_ == INT64_MIN && b.v_ == -1) throw Overflow{};
        return a.v_ / b.v_;
    }
    friend CheckedInt64 operator%(CheckedInt64 a, CheckedInt64 b) {
        if (b.v_ == -1) return 0;
        return a.v_ % b.v_;
    }
    CheckedInt64 operator-() const { return CheckedInt64(0) - *this; }
    friend bool operator==(CheckedInt64 a, CheckedInt64 b) { return a.v_ == b.v_; }
    friend auto operator<=>(CheckedInt64 a, CheckedInt64 b) { return a.v_ <=> b.v_; }

private:
    std::int64_t v_;
};

inline CheckedInt64 abs_value(CheckedInt64 a) { return a < 0 ? -a : a; }
inline BigInt abs_value(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }
inline BigInt to_big(CheckedInt64 a) { return BigInt(a.value()); }
inline BigInt to_big(const BigInt& a) { return a; }

/// Diagonal of a Smith form of the cokernel of a square sparse integer
/// matrix, unit entries (the bulk of a subdivided Laplacian) first.
template <class Int>
std::vector<BigInt> smith_diagonal(std::size_t n, const std::vector<std::map<std::size_t, std::int64_t>>& input) {
    std::vector<std::map<std::size_t, Int>> rows(n);
    std::vector<std::set<std::size_t>> cols(n);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, v] : input[i])
            if (v != 0) {
                rows[i][j] = Int(v);
                cols[j].insert(i);
            }
    std::vector<char> row_alive(n, 1), col_alive(n, 1);
    std::vector<BigInt> diag;

    // Unit pivots: each removes one row and column and contributes a 1.
    // Shortest rows go first to keep fill-in down; stale queue entries are
    // skipped by comparing the recorded size.
    using Item = std::pair<std::size_t, std::size_t>; // (row size, row)
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> work;
    for (std::size_t i = 0; i < n; ++i) work.emplace(rows[i].size(), i);
    while (!work.empty()) {
        const auto [size, r] = work.top();
        work.pop();
        if (!row_alive[r] || size != rows[r].size()) continue;
        std::size_t best = n;
        for (const auto& [c, v] : rows[r])
            if ((v == Int(1) || v == Int(-1)) && (best == n || cols[c].size() < cols[best].size())) best = c;
        if (best == n) continue;
        const std::size_t c = best;
        const Int u = rows[r].at(c);
        const std::vector<std::size_t> others(cols[c].begin(), cols[c].end());
        for (std::size_t r2 : others) {
            if (r2 == r) continue;
            const Int f = rows[r2].at(c) * u; // u = 1/u for units
            for (const auto& [j, v] : rows[r]) {
                Int nv = rows[r2].count(j) ? rows[r2][j] - f * v : Int(0) - f * v;
                if (nv == Int(0)) {
                    rows[r2].erase(j);
                    cols[j].erase(r2);
                } else {
                    rows[r2][j] = nv;
                    cols[j].insert(r2);
                }
            }
            work.emplace(rows[r2].size(), r2);
        }
        for (const auto& [j, v] : rows[r]) cols[j].erase(r);
        rows[r].clear();
        row_alive[r] = 0;
        col_alive[c] = 0;
        diag.emplace_back(1);
    }

    // Dense Smith form of what is left.
    std::vector<std::size_t> ri, ci;
    for (std::size_t i = 0; i < n; ++i) {
        if (row_alive[i]) ri.push_back(i);
        if (col_alive[i]) ci.push_back(i);
    }
    require(ri.size() == ci.size(), "matrix is not square");
    const std::size_t m = ri.size();
    std::vector<std::vector<Int>> a(m, std::vector<Int>(m, Int(0)));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (auto it = rows[ri[i]].find(ci[j]); it != rows[ri[i]].end()) a[i][j] = it->second;

    for (std::size_t t = 0; t < m; ++t) {
        for (;;) {
            // Smallest nonzero entry in the trailing block becomes the pivot.
            std::size_t pi = m, pj = m;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < m; ++j)
                    if (a[i][j] != Int(0) && (pi == m || abs_value(a[i][j]) < abs_value(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == m) break;
            std::swap(a[t], a[pi]);
            for (auto& row : a) std::swap(row[t], row[pj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                const Int q = a[i][t] / a[t][t];
                if (q != Int(0))
                    for (std::size_t j = t; j < m; ++j) a[i][j] = a[i][j] - q * a[t][j];
                if (a[i][t] != Int(0)) clean = false;
            }
            for (std::size_t j = t + 1; j < m; ++j) {
                const Int q = a[t][j] / a[t][t];
                if (q != Int(0))
                    for (std::size_t i = t; i < m; ++i) a[i][j] = a[i][j] - q * a[i][t];
                if (a[t][j] != Int(0)) clean = false;
            }
            if (!clean) continue;
            // Pivot must divide the rest of the block.
            bool divides = true;
            for (std::size_t i = t + 1; i < m && divides; ++i)
                for (std::size_t j = t + 1; j < m; ++j)
                    if (a[i][j] % a[t][t] != Int(0)) {
                        for (std::size_t k = t; k < m; ++k) a[t][k] = a[t][k] + a[i][k];
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        diag.push_back(abs_value(to_big(a[t][t])));
    }
    return diag;
}

inline std::vector<BigInt> smith_diagonal(std::size_t n, const std::vector<std::map<std::size_t, std::int64_t>>& m) {
    try {
        return smith_diagonal<CheckedInt64>(n, m);
    } catch (const Overflow&) {
        return smith_diagonal<BigInt>(n, m);
    }
}

/// Divisibility chain from an arbitrary diagonal; zero entries are free parts.
inline std::vector<BigInt> invariant_chain(std::vector<BigInt> d) {
    // Units are neutral; dropping them keeps the pairwise pass small.
    d.erase(std::remove(d.begin(), d.end(), BigInt(1)), d.end());
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = i + 1; j < d.size(); ++j) {
            if (d[i] == 0 && d[j] == 0) continue;
            const BigInt g = boost::multiprecision::gcd(d[i], d[j]);
            const BigInt l = g == 0 ? BigInt(0) : BigInt(d[i] / g * d[j]);
            d[i] = g;
            d[j] = l;
        }
    return d;
}

/// Spanning trees of the subdivision, from the unsubdivided graph: the
/// product of all lengths times the reduced determinant of the conductance
/// Laplacian (conductance 1/length), computed over the rationals.
inline BigInt subdivided_tree_count(const MetrizedGraph& g) {
    const std::size_t n = g.vertices.size();
    if (n <= 1) return 1;
    std::vector<std::vector<BigRational>> L(n - 1, std::vector<BigRational>(n - 1));
    BigInt lengths = 1;
    for (const auto& e : g.edges) {
        lengths *= e.length;
        if (e.u == e.v) continue;
        const BigRational c(1, e.length);
        if (e.u < n - 1) L[e.u][e.u] += c;
        if (e.v < n - 1) L[e.v][e.v] += c;
        if (e.u < n - 1 && e.v < n - 1) {
            L[e.u][e.v] -= c;
            L[e.v][e.u] -= c;
        }
    }
    BigRational det = 1;
    const std::size_t m = n - 1;
    for (std::size_t c = 0; c < m; ++c) {
        std::size_t piv = c;
        while (piv < m && L[piv][c] == 0) ++piv;
        if (piv == m) return 0;
        if (piv != c) {
            std::swap(L[piv], L[c]);
            det = -det;
        }
        det *= L[c][c];
        for (std::size_t r = c + 1; r < m; ++r) {
            if (L[r][c] == 0) continue;
            const BigRational f = L[r][c] / L[c][c];
            for (std::size_t k = c; k < m; ++k) L[r][k] -= f * L[c][k];
        }
    }
    const BigRational total = det * BigRational(lengths);
    verify(denominator(total) == 1, "spanning tree count is not an integer");
    return numerator(total);
}

} // namespace detail

/// Critical group of the subdivided graph: cokernel of its reduced Laplacian.
inline AbelianInvariants component_group(const MetrizedGraph& g) {
    detail::require(!g.vertices.empty(), "empty graph");
    detail::require(g.connected(), "component_group needs a connected graph");
    const MetrizedGraph sub = subdivide(g);
    const std::size_t n = sub.vertices.size();
    AbelianInvariants out;
    if (n > 1) {
        // Laplacian with the last vertex (row and column) deleted.
        std::vector<std::map<std::size_t, std::int64_t>> L(n - 1);
        for (const auto& e : sub.edges) {
            if (e.u == e.v) continue;
            if (e.u < n - 1) L[e.u][e.u] += 1;
            if (e.v < n - 1) L[e.v][e.v] += 1;
            if (e.u < n - 1 && e.v < n - 1) {
                L[e.u][e.v] -= 1;
                L[e.v][e.u] -= 1;
            }
        }
        for (const auto& d : detail::invariant_chain(detail::smith_diagonal(n - 1, L))) {
            detail::verify(d != 0, "reduced Laplacian of a connected graph is singular");
            if (d != 1) out.factors.push_back(d);
        }
    }
    const BigInt trees = detail::subdivided_tree_count(g);
    detail::verify(out.order() == trees, "Kirchhoff check failed: group order " + out.order().str() +
                                             " but " + trees.str() + " spanning trees");
    return out;
}

struct CorollaryCheck {
    std::uint32_t p = 0;
    std::uint64_t S = 0;
    bool vacuous = false; // S <= 1
    AbelianInvariants expected;
    AbelianInvariants actual;
    bool passed = false;
    std::string formula;
};

/// Component group of the ns+ fiber against (Z/8nZ) x (Z/8Z)^{S-2},
/// n = numerator((p-1)/12), for p ≡ 1 mod 4; trivial for p ≡ 3 mod 4.
inline CorollaryCheck ns_plus_component_check(std::uint64_t p) {
    CorollaryCheck c;
    c.p = static_cast<std::uint32_t>(p);
    const auto g = special_fiber(Family::NSPlus, p);
    c.S = g.ss.s;
    c.actual = component_group(metrized_graph(g));
    if (p % 4 == 3) {
        c.formula = "trivial (p ≡ 3 mod 4)";
    } else if (c.S <= 1) {
        c.vacuous = true;
        c.formula = "vacuous (S = " + std::to_string(c.S) + "), graph is a tree";
    } else {
        const std::uint64_t n = (p - 1) / std::gcd<std::uint64_t>(p - 1, 12);
        std::vector<std::uint64_t> f(c.S - 2, 8);
        f.push_back(8 * n);
        c.expected = make_invariants(f);
        c.formula = "(Z/8nZ) x (Z/8Z)^(S-2), n = " + std::to_string(n) + ", S = " + std::to_string(c.S);
    }
    c.passed = c.actual == c.expected;
    return c;
}

} // namespace fibercurve
