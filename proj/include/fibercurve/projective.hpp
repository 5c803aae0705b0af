#pragma once

// P^1(F_p), PGL_2(F_p), subgroup closure, orbits and coset permutations.

#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "error.hpp"
#include "modular.hpp"

namespace fibercurve {

inline constexpr std::size_t kMaxSubgroupOrder = 100'000;

/// A point of P^1(F_p): finite t in [0, p), or infinity.  Finite points
/// sort before infinity.
class ProjPoint {
public:
    static ProjPoint finite(std::uint32_t t) { return ProjPoint(false, t); }
    static ProjPoint infinity() { return ProjPoint(true, 0); }

    bool is_infinity() const { return inf_; }
    std::uint32_t value() const {
        detail::require(!inf_, "infinity has no affine coordinate");
        return t_;
    }
    /// Position in canonical order: t for finite points, p for infinity.
    std::uint32_t index(std::uint32_t p) const { return inf_ ? p : t_; }
    static ProjPoint from_index(std::uint32_t i, std::uint32_t p) { return i == p ? infinity() : finite(i); }

    friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
    friend bool operator<(const ProjPoint& a, const ProjPoint& b) {
        if (a.inf_ != b.inf_) return b.inf_;
        return a.t_ < b.t_;
    }

    std::string to_string() const { return inf_ ? "inf" : std::to_string(t_); }

private:
    ProjPoint(bool inf, std::uint32_t t) : inf_(inf), t_(t) {}
    bool inf_;
    std::uint32_t t_;
};

/// An element of PGL_2(F_p), stored with its first nonzero entry equal to 1.
class ProjTransform {
public:
    ProjTransform(std::uint32_t p, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) : p_(p) {
        const Modulus mod(p);
        m_ = {mod.from_signed(a), mod.from_signed(b), mod.from_signed(c), mod.from_signed(d)};
        detail::require(det_raw(mod) != 0, "singular matrix is not in PGL_2");
        normalize(mod);
    }

    static ProjTransform identity(std::uint32_t p) { return ProjTransform(p, 1, 0, 0, 1); }

    std::uint32_t p() const { return p_; }
    const std::array<std::uint32_t, 4>& entries() const { return m_; }
    std::uint32_t a() const { return m_[0]; }
    std::uint32_t b() const { return m_[1]; }
    std::uint32_t c() const { return m_[2]; }
    std::uint32_t d() const { return m_[3]; }

    /// Determinant of the stored representative.  Its square class is an
    /// invariant of the PGL_2 class.
    std::uint32_t det() const { return det_raw(Modulus(p_)); }
    bool in_psl2() const { return Modulus(p_).is_square(det()); }

    bool is_identity() const { return m_[0] == 1 && m_[1] == 0 && m_[2] == 0 && m_[3] == 1; }

    ProjTransform inverse() const {
        return ProjTransform(p_, m_[3], p_ - m_[1], p_ - m_[2], m_[0]);
    }

    ProjTransform transpose() const { return ProjTransform(p_, m_[0], m_[2], m_[1], m_[3]); }

    friend ProjTransform operator*(const ProjTransform& x, const ProjTransform& y) {
        detail::require(x.p_ == y.p_, "PGL_2 elements over different primes");
        const std::uint64_t p = x.p_;
        auto e = [&](int i, int j, int k, int l) {
            return static_cast<std::int64_t>((static_cast<std::uint64_t>(x.m_[i]) * y.m_[j] +
                                              static_cast<std::uint64_t>(x.m_[k]) * y.m_[l]) % p);
        };
        return ProjTransform(x.p_, e(0, 0, 1, 2), e(0, 1, 1, 3), e(2, 0, 3, 2), e(2, 1, 3, 3));
    }

    friend bool operator==(const ProjTransform&, const ProjTransform&) = default;

    /// Injective 63-bit key of the canonical form (p < 2^20).
    std::uint64_t key() const {
        if (m_[0] == 1)
            return (std::uint64_t{1} << 62) | (std::uint64_t{m_[1]} << 40) | (std::uint64_t{m_[2]} << 20) | m_[3];
        return (std::uint64_t{m_[2]} << 20) | m_[3];
    }
    friend bool operator<(const ProjTransform& x, const ProjTransform& y) { return x.key() < y.key(); }

    std::string to_string() const {
        return "[[" + std::to_string(m_[0]) + "," + std::to_string(m_[1]) + "],[" + std::to_string(m_[2]) + "," +
               std::to_string(m_[3]) + "]]";
    }

private:
    std::uint32_t det_raw(const Modulus& mod) const { return mod.sub(mod.mul(m_[0], m_[3]), mod.mul(m_[1], m_[2])); }
    void normalize(const Modulus& mod) {
        const std::uint32_t lead = m_[0] ? m_[0] : m_[1];
        if (lead == 1) return;
        const std::uint32_t inv = mod.inv(lead);
        for (auto& v : m_) v = mod.mul(v, inv);
    }

    std::uint32_t p_;
    std::array<std::uint32_t, 4> m_{};
};

/// (x:y) -> (ax+by : cx+dy).
inline ProjPoint act(const ProjTransform& g, const ProjPoint& P) {
    const Modulus mod(g.p());
    std::uint32_t x, y;
    if (P.is_infinity()) {
        x = 1;
        y = 0;
    } else {
        x = P.value();
        y = 1;
    }
    const std::uint32_t nx = mod.add(mod.mul(g.a(), x), mod.mul(g.b(), y));
    const std::uint32_t ny = mod.add(mod.mul(g.c(), x), mod.mul(g.d(), y));
    if (ny == 0) return ProjPoint::infinity();
    return ProjPoint::finite(mod.mul(nx, mod.inv(ny)));
}

class SubgroupTable {
public:
    std::uint32_t p() const { return p_; }
    std::size_t order() const { return elems_.size(); }
    const std::vector<ProjTransform>& elements() const { return elems_; }
    const std::vector<ProjTransform>& generators() const { return gens_; }
    bool contains(const ProjTransform& g) const { return index_.count(g.key()) != 0; }

    /// Sorted element keys; identifies the subgroup independently of generators.
    std::vector<std::uint64_t> fingerprint() const {
        std::vector<std::uint64_t> k;
        k.reserve(elems_.size());
        for (const auto& e : elems_) k.push_back(e.key());
        std::sort(k.begin(), k.end());
        return k;
    }

private:
    friend SubgroupTable generate_subgroup(const std::vector<ProjTransform>&, std::size_t);
    friend SubgroupTable restrict_to_psl2(const SubgroupTable&);
    std::uint32_t p_ = 0;
    std::vector<ProjTransform> elems_;
    std::vector<ProjTransform> gens_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Breadth-first closure; elements appear in discovery order starting from
/// the identity, right-multiplying by generators in the given order.
inline SubgroupTable generate_subgroup(const std::vector<ProjTransform>& gens, std::size_t cap = kMaxSubgroupOrder) {
    detail::require(!gens.empty(), "generate_subgroup: empty generator list");
    SubgroupTable t;
    t.p_ = gens.front().p();
    for (const auto& g : gens) detail::require(g.p() == t.p_, "generators over different primes");
    t.gens_ = gens;
    const auto id = ProjTransform::identity(t.p_);
    t.elems_.push_back(id);
    t.index_.emplace(id.key(), 0);
    for (std::size_t i = 0; i < t.elems_.size(); ++i) {
        for (const auto& g : gens) {
            ProjTransform y = t.elems_[i] * g;
            if (t.index_.emplace(y.key(), t.elems_.size()).second) {
                if (t.elems_.size() >= cap) throw bound_error("subgroup closure exceeds cap " + std::to_string(cap));
                t.elems_.push_back(y);
            }
        }
    }
    const std::uint64_t p = t.p_;
    detail::verify((p * (p - 1) * (p + 1)) % t.elems_.size() == 0, "subgroup order does not divide |PGL_2|");
    return t;
}

struct Orbit {
    std::vector<ProjPoint> points; // sorted, smallest first
    std::size_t isotropy = 0;

    std::size_t size() const { return points.size(); }
    const ProjPoint& representative() const { return points.front(); }
    bool contains(const ProjPoint& P) const { return std::binary_search(points.begin(), points.end(), P); }
};

/// Orbits of H on P^1(F_p), ordered by smallest member.  Orbit-stabilizer
/// is checked on every orbit by counting the stabilizer directly.
inline std::vector<Orbit> orbits(const SubgroupTable& H) {
    const std::uint32_t p = H.p();
    std::vector<char> seen(p + 1, 0);
    std::vector<Orbit> out;
    for (std::uint32_t i = 0; i <= p; ++i) {
        if (seen[i]) continue;
        const ProjPoint P = ProjPoint::from_index(i, p);
        Orbit o;
        std::size_t stab = 0;
        for (const auto& h : H.elements()) {
            const ProjPoint Q = act(h, P);
            if (Q == P) ++stab;
            if (!seen[Q.index(p)]) {
                seen[Q.index(p)] = 1;
                o.points.push_back(Q);
            }
        }
        std::sort(o.points.begin(), o.points.end());
        detail::verify(o.points.size() * stab == H.order(), "orbit-stabilizer violated");
        o.isotropy = stab;
        out.push_back(std::move(o));
    }
    return out;
}

inline const Orbit& orbit_of(const std::vector<Orbit>& os, const ProjPoint& P) {
    for (const auto& o : os)
        if (o.contains(P)) return o;
    throw precondition_error("point not covered by orbit list");
}

/// H intersected with PSL_2, the elements of square determinant.  This is the
/// kernel of the square-class map H -> F_p^* / (F_p^*)^2, so no closure
/// check is needed.
inline SubgroupTable restrict_to_psl2(const SubgroupTable& H) {
    SubgroupTable t;
    t.p_ = H.p_;
    for (const auto& h : H.elems_)
        if (h.in_psl2()) {
            t.index_.emplace(h.key(), t.elems_.size());
            t.elems_.push_back(h);
        }
    t.gens_ = t.elems_;
    detail::verify(t.elems_.size() == H.elems_.size() || 2 * t.elems_.size() == H.elems_.size(),
                   "PSL_2 part must have index 1 or 2");
    return t;
}

/// Right cosets H\G for G generated by `gens`, enumerated by breadth-first
/// search on coset representatives.  G itself is never listed, so this works
/// for G = PSL_2(F_p) at sizes far beyond the subgroup cap.
class CosetSpace {
public:
    CosetSpace(const SubgroupTable& H, const std::vector<ProjTransform>& gens) : p_(H.p()), mod_(H.p()) {
        detail::require(!gens.empty(), "coset space needs generators");
        inv_.resize(p_);
        for (std::uint32_t x = 1; x < p_; ++x) inv_[x] = mod_.inv(x);
        for (const auto& h : H.elements()) h_.push_back(h.entries());
        gens_.reserve(gens.size());
        for (const auto& g : gens) gens_.push_back(g.entries());

        add(ProjTransform::identity(p_).entries());
        gen_perms_.resize(gens_.size());
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            for (std::size_t k = 0; k < gens_.size(); ++k) gen_perms_[k].push_back(add(mul(reps_[i], gens_[k])));
        }
    }

    std::size_t size() const { return reps_.size(); }

    /// Permutation of the k-th generator, recorded during enumeration.
    const std::vector<std::size_t>& generator_permutation(std::size_t k) const { return gen_perms_.at(k); }

    /// Index of the coset H*(rep_i * g), found by direct lookup.
    std::size_t image(std::size_t i, const ProjTransform& g) const {
        auto it = index_.find(coset_key(mul(reps_.at(i), g.entries())));
        detail::require(it != index_.end(), "element does not lie in the generated group");
        return it->second;
    }

    /// Index of the coset H*x; x must lie in G.
    std::size_t coset_of(const ProjTransform& x) const {
        auto it = index_.find(coset_key(x.entries()));
        detail::require(it != index_.end(), "element does not lie in the generated group");
        return it->second;
    }

    /// Permutation Hx -> Hxg of the cosets.
    std::vector<std::size_t> permutation(const ProjTransform& g) const {
        std::vector<std::size_t> perm(reps_.size());
        std::vector<char> hit(reps_.size(), 0);
        for (std::size_t i = 0; i < reps_.size(); ++i) {
            auto it = index_.find(coset_key(mul(reps_[i], g.entries())));
            detail::require(it != index_.end(), "element does not lie in the generated group");
            perm[i] = it->second;
            detail::verify(!hit[it->second], "coset action is not a permutation");
            hit[it->second] = 1;
        }
        return perm;
    }

    std::size_t cycles(const ProjTransform& g) const;

private:
    using Mat = std::array<std::uint32_t, 4>;

    Mat mul(const Mat& x, const Mat& y) const {
        auto e = [&](int i, int j, int k, int l) {
            return mod_.reduce(static_cast<std::uint64_t>(x[i]) * y[j] + static_cast<std::uint64_t>(x[k]) * y[l]);
        };
        return {e(0, 0, 1, 2), e(0, 1, 1, 3), e(2, 0, 3, 2), e(2, 1, 3, 3)};
    }

    std::uint64_t key(Mat m) const {
        const std::uint32_t lead = m[0] ? m[0] : m[1];
        if (lead != 1) {
            const std::uint32_t inv = inv_[lead];
            for (auto& v : m) v = mod_.mul(v, inv);
        }
        if (m[0] == 1)
            return (std::uint64_t{1} << 62) | (std::uint64_t{m[1]} << 40) | (std::uint64_t{m[2]} << 20) | m[3];
        return (std::uint64_t{m[2]} << 20) | m[3];
    }

    std::uint64_t coset_key(const Mat& x) const {
        std::uint64_t best = ~std::uint64_t{0};
        for (const auto& h : h_) best = std::min(best, key(mul(h, x)));
        return best;
    }

    std::size_t add(const Mat& x) {
        auto [it, inserted] = index_.emplace(coset_key(x), reps_.size());
        if (inserted) reps_.push_back(x);
        return it->second;
    }

    std::uint32_t p_;
    Modulus mod_;
    std::vector<std::uint32_t> inv_;
    std::vector<Mat> h_;
    std::vector<Mat> gens_;
    std::vector<Mat> reps_;
    std::vector<std::vector<std::size_t>> gen_perms_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

/// Number of cycles of a permutation given as an image table.
inline std::size_t cycle_count(const std::vector<std::size_t>& perm) {
    std::vector<char> seen(perm.size(), 0);
    std::size_t c = 0;
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        ++c;
        for (std::size_t j = i; !seen[j]; j = perm[j]) seen[j] = 1;
    }
    return c;
}

/// x -> b(a(x)), the right action of the product a*b.
inline std::vector<std::size_t> compose(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
    std::vector<std::size_t> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = b[a[i]];
    return r;
}

inline std::size_t CosetSpace::cycles(const ProjTransform& g) const { return cycle_count(permutation(g)); }

inline std::vector<std::size_t> invert(const std::vector<std::size_t>& a) {
    std::vector<std::size_t> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[a[i]] = i;
    return r;
}

namespace detail {

struct CosetCache {
    std::shared_mutex mutex;
    std::map<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>, std::shared_ptr<const CosetSpace>> spaces;
};

inline CosetCache& coset_cache() {
    static CosetCache c;
    return c;
}

} // namespace detail

/// Cached coset space H\<gens>, keyed by the element set of H and the
/// generator keys.  Concurrent lookups share; insertion is last-writer-wins.
inline std::shared_ptr<const CosetSpace> coset_space(const SubgroupTable& H, const std::vector<ProjTransform>& gens) {
    std::vector<std::uint64_t> gk;
    for (const auto& g : gens) gk.push_back(g.key());
    auto key = std::make_pair(H.fingerprint(), std::move(gk));
    auto& cache = detail::coset_cache();
    {
        std::shared_lock lock(cache.mutex);
        if (auto it = cache.spaces.find(key); it != cache.spaces.end()) return it->second;
    }
    auto space = std::make_shared<const CosetSpace>(H, gens);
    std::unique_lock lock(cache.mutex);
    cache.spaces[std::move(key)] = space;
    return space;
}

/// Number of cycles of g on the right cosets H\G.
inline std::size_t coset_cycle_counts(const SubgroupTable& G, const SubgroupTable& H, const ProjTransform& g) {
    detail::require(G.p() == H.p(), "subgroups over different primes");
    for (const auto& h : H.elements())
        detail::require(G.contains(h), "H is not contained in G");
    detail::require(G.contains(g), "g is not an element of G");
    return coset_space(H, G.generators())->cycles(g);
}

} // namespace fibercurve
