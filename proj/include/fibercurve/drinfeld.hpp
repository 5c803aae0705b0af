#pragma once

// Equations of Drinfeld (horizontal) components.
//
// Cartan families get their closed hyperelliptic forms with the constant set
// to 1.  Exceptional families go through the orbit quotient
//     phi(t) = prod_{P in O1} (t - P)^{#H1} / prod_{P in O2} (t - P)^{#H2}
// and the cover u^{(p+1)/2} = prod (t - phi(R))^{1/#H_R}.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "exceptional.hpp"
#include "field.hpp"
#include "modular.hpp"
#include "projective.hpp"
#include "superelliptic.hpp"

namespace fibercurve {

enum class CartanFamily { NS, NSPlus, S, SPlus };

inline std::string to_string(CartanFamily f) {
    switch (f) {
    case CartanFamily::NS: return "ns";
    case CartanFamily::NSPlus: return "ns+";
    case CartanFamily::S: return "s";
    case CartanFamily::SPlus: return "s+";
    }
    return "?";
}

inline CartanFamily parse_cartan_family(const std::string& s) {
    if (s == "ns") return CartanFamily::NS;
    if (s == "ns+") return CartanFamily::NSPlus;
    if (s == "s") return CartanFamily::S;
    if (s == "s+") return CartanFamily::SPlus;
    throw precondition_error("unknown Cartan family '" + s + "'");
}

inline bool is_normalizer(CartanFamily f) { return f == CartanFamily::NSPlus || f == CartanFamily::SPlus; }

/// Closed-form Drinfeld component over a supersingular point with automorphism
/// order e (1 generic, 2 for j = 1728, 3 for j = 0).
inline SuperellipticCurve cartan_drinfeld(CartanFamily f, std::uint64_t p, int e) {
    require_prime(p);
    detail::require(e == 1 || e == 2 || e == 3, "automorphism order e must be 1, 2 or 3");
    if (e == 2) detail::require(p % 4 == 3, "e = 2 requires p ≡ 3 mod 4 (j = 1728 supersingular)");
    if (e == 3) detail::require(p % 3 == 2, "e = 3 requires p ≡ 2 mod 3 (j = 0 supersingular)");
    const auto pp = static_cast<std::uint32_t>(p);
    if (!is_normalizer(f)) return SuperellipticCurve::closed(pp, CurveForm::PowerPlusOne, (p + 1) / e);
    if (e == 2) return SuperellipticCurve::closed(pp, CurveForm::ProjectiveLine, 0);
    return SuperellipticCurve::closed(pp, CurveForm::XTimesPowerPlusOne, (p + 1) / (2 * e));
}

/// phi on P^1(F_p), stored as numerator and denominator polynomials over F_p.
class QuotientFunction {
public:
    QuotientFunction(FqPoly num, FqPoly den) : num_(std::move(num)), den_(std::move(den)) {}

    const FqPoly& numerator() const { return num_; }
    const FqPoly& denominator() const { return den_; }

    ProjPoint operator()(const ProjPoint& P) const {
        if (P.is_infinity()) {
            if (num_.degree() > den_.degree()) return ProjPoint::infinity();
            if (num_.degree() < den_.degree()) return ProjPoint::finite(0);
            return ProjPoint::finite((num_.leading() / den_.leading()).residue());
        }
        const Field F = num_.field();
        const Fq t = F.from_int(P.value());
        const Fq d = den_(t);
        const Fq n = num_(t);
        if (d.is_zero()) {
            detail::verify(!n.is_zero(), "phi has a common zero in numerator and denominator");
            return ProjPoint::infinity();
        }
        return ProjPoint::finite((n / d).residue());
    }

private:
    FqPoly num_, den_;
};

inline QuotientFunction quotient_function(std::uint32_t p, const Orbit& O1, const Orbit& O2) {
    const Field F = Field::create(p);
    auto build = [&](const Orbit& O) {
        FqPoly r = FqPoly::constant(F.one());
        for (const auto& P : O.points) {
            if (P.is_infinity()) continue;
            const FqPoly lin = FqPoly::linear(F.from_int(P.value()));
            for (std::size_t i = 0; i < O.isotropy; ++i) r = r * lin;
        }
        return r;
    };
    return QuotientFunction(build(O1), build(O2));
}

struct ExceptionalDrinfeld {
    ExceptionalKind kind;
    SuperellipticCurve curve;
    ProjPoint first;  // representative of O1
    std::optional<ProjPoint> second; // representative of O2; empty when O2 lies outside P^1(F_p)
    /// (value of phi, isotropy) for every orbit, infinity included.
    std::vector<std::pair<ProjPoint, std::size_t>> branch_values;
};

/// The orbit pair used when none is given: (orbit of 0, orbit of 1), or, if
/// those coincide, (orbit of 1, orbit of the smallest point outside it).
/// A4 at p = 13 uses (orbit of 1, orbit of 3).
inline std::pair<ProjPoint, ProjPoint> default_orbit_pair(ExceptionalKind k, std::uint64_t p,
                                                          const std::vector<Orbit>& os) {
    if (k == ExceptionalKind::A4 && p == 13) return {ProjPoint::finite(1), ProjPoint::finite(3)};
    const ProjPoint zero = ProjPoint::finite(0), one = ProjPoint::finite(1);
    if (!orbit_of(os, zero).contains(one)) return {zero, one};
    const Orbit& o1 = orbit_of(os, one);
    for (std::uint32_t i = 0; i <= p; ++i) {
        const auto P = ProjPoint::from_index(i, static_cast<std::uint32_t>(p));
        if (!o1.contains(P)) return {one, P};
    }
    throw precondition_error("the group acts transitively on P^1(F_p); no orbit pair exists");
}

inline ExceptionalDrinfeld exceptional_drinfeld(ExceptionalKind k, std::uint64_t p, const SubgroupTable& H,
                                                const ProjPoint& r1, const ProjPoint& r2) {
    const auto pp = static_cast<std::uint32_t>(p);
    const auto os = orbits(H);
    const Orbit& O1 = orbit_of(os, r1);
    const Orbit& O2 = orbit_of(os, r2);
    detail::require(!O1.contains(r2), "orbit pair must consist of two distinct orbits");
    const std::uint64_t N = (p + 1) / 2;
    const auto phi = quotient_function(pp, O1, O2);

    ExceptionalDrinfeld out{k, {}, O1.representative(), O2.representative(), {}};
    std::vector<Branch> br;
    for (const auto& O : os) {
        const ProjPoint v = phi(O.representative());
        out.branch_values.emplace_back(v, O.isotropy);
        if (v.is_infinity()) continue;
        std::int64_t m = 0;
        try {
            m = inverse_mod(static_cast<std::int64_t>(O.isotropy), static_cast<std::int64_t>(N));
        } catch (const precondition_error&) {
            throw verification_error("isotropy order " + std::to_string(O.isotropy) + " not invertible mod " +
                                     std::to_string(N));
        }
        br.push_back({v.value(), static_cast<std::uint64_t>(m)});
    }
    std::vector<ProjPoint> vals;
    for (const auto& [v, _] : out.branch_values) vals.push_back(v);
    std::sort(vals.begin(), vals.end());
    detail::verify(std::adjacent_find(vals.begin(), vals.end()) == vals.end(), "phi is not injective on orbits");
    out.curve = SuperellipticCurve::cyclic(pp, N, std::move(br));
    return out;
}

/// H transitive on P^1(F_p).  O1 = P^1(F_p) is the only rational orbit and O2
/// is taken outside it; phi vanishes on O1, so 0 is the single finite branch
/// value and the component u^N = t^{1/#H_R} is rational.
inline ExceptionalDrinfeld transitive_drinfeld(ExceptionalKind k, std::uint64_t p, const Orbit& O) {
    const std::uint64_t N = (p + 1) / 2;
    ExceptionalDrinfeld out{k, {}, O.representative(), std::nullopt, {{ProjPoint::finite(0), O.isotropy}}};
    const auto m = inverse_mod(static_cast<std::int64_t>(O.isotropy), static_cast<std::int64_t>(N));
    out.curve = SuperellipticCurve::cyclic(static_cast<std::uint32_t>(p), N, {{0, static_cast<std::uint64_t>(m)}});
    return out;
}

/// Default pair when none is given; the transitive case needs no pair.
inline ExceptionalDrinfeld exceptional_drinfeld(ExceptionalKind k, std::uint64_t p, const SubgroupTable& H,
                                                std::optional<std::pair<ProjPoint, ProjPoint>> pair) {
    const auto os = orbits(H);
    if (!pair && os.size() == 1) return transitive_drinfeld(k, p, os.front());
    const auto chosen = pair ? *pair : default_orbit_pair(k, p, os);
    return exceptional_drinfeld(k, p, H, chosen.first, chosen.second);
}

inline ExceptionalDrinfeld exceptional_drinfeld(ExceptionalKind k, std::uint64_t p,
                                                std::optional<std::pair<ProjPoint, ProjPoint>> pair = std::nullopt) {
    return exceptional_drinfeld(k, p, build_exceptional(k, p), pair);
}

namespace detail {

struct LinearSolution {
    Fq particular;
    int nullity;
};

/// Solves alpha^p beta - alpha beta^p = a for beta, an F_p-linear equation.
inline std::optional<LinearSolution> solve_source(const Fq& alpha, const Fq& a) {
    const Field F = alpha.field();
    const auto n = static_cast<std::size_t>(F.degree());
    const Modulus& mod = F.modulus();
    const Fq ap = alpha.frobenius();
    // Augmented matrix; column j is the image of the basis vector x^j.
    std::vector<std::vector<std::uint32_t>> M(n, std::vector<std::uint32_t>(n + 1));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::uint32_t> e(n, 0);
        e[j] = 1;
        const Fq b = F.from_coords(e);
        const Fq img = ap * b - alpha * b.frobenius();
        for (std::size_t i = 0; i < n; ++i) M[i][j] = img.coord(static_cast<int>(i));
    }
    for (std::size_t i = 0; i < n; ++i) M[i][n] = a.coord(static_cast<int>(i));
    std::vector<std::size_t> pivot_col;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < n; ++col) {
        std::size_t piv = row;
        while (piv < n && M[piv][col] == 0) ++piv;
        if (piv == n) continue;
        std::swap(M[piv], M[row]);
        const std::uint32_t inv = mod.inv(M[row][col]);
        for (auto& v : M[row]) v = mod.mul(v, inv);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == row || M[r][col] == 0) continue;
            const std::uint32_t f = M[r][col];
            for (std::size_t c = 0; c <= n; ++c) M[r][c] = mod.sub(M[r][c], mod.mul(f, M[row][c]));
        }
        pivot_col.push_back(col);
        ++row;
    }
    for (std::size_t r = row; r < n; ++r)
        if (M[r][n] != 0) return std::nullopt;
    std::vector<std::uint32_t> sol(n, 0);
    for (std::size_t r = 0; r < pivot_col.size(); ++r) sol[pivot_col[r]] = M[r][n];
    return LinearSolution{F.from_coords(sol), static_cast<int>(n - row)};
}

inline Fq random_element(const Field& F, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::uint64_t> d(0, F.order() - 1);
    return F.from_index(d(rng));
}

/// An element of exact multiplicative order n (n | q - 1).
inline Fq element_of_order(const Field& F, std::uint64_t n, std::mt19937_64& rng) {
    const auto factors = prime_factors(n);
    for (;;) {
        const Fq x = random_element(F, rng);
        if (x.is_zero()) continue;
        const Fq l = x.pow((F.order() - 1) / n);
        bool ok = true;
        for (auto r : factors)
            if (l.pow(n / r).is_one()) ok = false;
        if (ok) return l;
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Point count of x^p y - x y^p = a z^{p+1} over F_{p^2}.

inline constexpr std::uint64_t kMaxPointCountPrime = 31;

/// a is admissible when a != 0 and a^p = -a, i.e. a^2 in F_p but a not in F_p.
inline bool admissible_scale(const Fq& a) {
    return !a.is_zero() && a.frobenius() == -a;
}

/// Smallest admissible scale in F_{p^2}.
inline Fq default_scale(std::uint64_t p) {
    const Field F = Field::create(p, 2);
    for (std::uint64_t i = 1; i < F.order(); ++i) {
        const Fq a = F.from_index(i);
        if (admissible_scale(a)) return a;
    }
    throw verification_error("no admissible scale in F_{p^2}");
}

inline std::uint64_t count_points_fp2(std::uint64_t p, const Fq& a) {
    if (p > kMaxPointCountPrime) throw bound_error("count_points_fp2: p must be at most 31");
    require_prime(p);
    const Field F = Field::create(p, 2);
    detail::require(a.field() == F, "scale must lie in F_{p^2}");
    detail::require(admissible_scale(a), "scale must be a nonzero square root of an element of F_p outside F_p");
    // Fibre over each x: the solutions in y form a coset of the kernel of
    // y -> x^p y - x y^p, or are empty.
    std::uint64_t affine = 0;
    for (const auto& x : F.elements()) {
        if (auto sol = detail::solve_source(x, a)) {
            std::uint64_t c = 1;
            for (int i = 0; i < sol->nullity; ++i) c *= p;
            affine += c;
        }
    }
    // z = 0: x y (x^{p-1} - y^{p-1}) = 0, i.e. the p + 1 points of P^1(F_p).
    return affine + p + 1;
}

// ---------------------------------------------------------------------------
// Quotient-map checks on sampled points of alpha^p beta - alpha beta^p = a.

inline constexpr int kMaxSampleExtension = 6;

struct QuotientMapCheck {
    struct Step {
        std::string name;
        std::string equation;
        std::size_t passed = 0;
    };
    CartanFamily family;
    std::uint32_t p;
    std::string source;
    std::string map;
    std::string target;
    std::size_t samples = 0;
    int extension_degree = 0; // F_{p^{2k}} used for sampling, 0 if no samples
    std::vector<Step> steps;
    bool passed = true;
    std::string witness;
};


inline QuotientMapCheck verify_quotient_maps(CartanFamily family, std::uint64_t p, std::size_t samples,
                                             std::uint64_t seed = 0x5eed) {
    if (p > kMaxPointCountPrime) throw bound_error("verify_quotient_maps: p must be at most 31");
    require_prime(p);
    QuotientMapCheck out;
    out.family = family;
    out.p = static_cast<std::uint32_t>(p);
    // a is a square root of the smallest non-residue c mod p, so a^p = -a and
    // every fibre over F_{p^2} already carries points.
    out.source = "alpha^p beta - alpha beta^p = a, a^2 = c non-residue";
    out.samples = samples;
    const bool split = family == CartanFamily::S || family == CartanFamily::SPlus;
    if (split) {
        out.map = "u = alpha^(p-1), v = alpha beta; U = u v - a/2, V = v";
        out.steps = {{"split-quotient", "v^p - u^2 v + a u = 0", 0}, {"split-hyperelliptic", "U^2 = V^(p+1) + a^2/4", 0}};
        if (family == CartanFamily::SPlus) out.steps.push_back({"split-normalizer", "Y^2 = X(X^((p+1)/2) + a^2/4), X = V^2, Y = U V", 0});
    } else {
        out.map = "at = l alpha + l^p beta, bt = l^p alpha + l beta; u1 = at^(p+1), v1 = at bt; U = u1 - aN/2, V = v1";
        out.steps = {{"nonsplit-coordinates", "aN = at^(p+1) - bt^(p+1)", 0},
                     {"nonsplit-quotient", "u1^2 - v1^(p+1) - aN u1 = 0", 0},
                     {"nonsplit-hyperelliptic", "U^2 = V^(p+1) + (aN/2)^2", 0}};
        if (family == CartanFamily::NSPlus) out.steps.push_back({"nonsplit-normalizer", "Y^2 = X(X^((p+1)/2) + (aN/2)^2), X = V^2, Y = U V", 0});
    }
    out.steps.push_back({"sl2-action", "(a alpha + c beta, b alpha + d beta) satisfies the source equation", 0});
    out.steps.push_back({"mu-action", "(u^-1 alpha, u^-1 beta), u^(p+1) = 1, satisfies the source equation", 0});
    out.target = out.steps[out.steps.size() - 3].equation;
    if (samples == 0) return out;

    std::mt19937_64 rng(seed ^ (p * 0x9e3779b97f4a7c15ULL) ^ static_cast<std::uint64_t>(family));
    const Modulus mod(static_cast<std::uint32_t>(p));
    const std::uint32_t c_nonresidue = smallest_nonresidue(mod);
    std::size_t done = 0;
    for (int k = 1; k <= kMaxSampleExtension && done < samples; ++k) {
        const Field F = Field::create(p, 2 * k);
        const Fq a = *sqrt_in_field(F.from_int(c_nonresidue));
        const Fq half = F.from_int(2).inverse();
        const Fq lambda = detail::element_of_order(F, p + 1, rng);
        const Fq lp = lambda.frobenius();
        const Fq Nc = lambda.pow(2).inverse() - lambda.pow(2);
        const std::uint64_t e_half = (p + 1) / 2;
        std::size_t misses = 0;
        out.extension_degree = 2 * k;
        while (done < samples && misses < 64 * p) {
            const Fq alpha = detail::random_element(F, rng);
            if (alpha.is_zero()) continue;
            auto b0 = detail::solve_source(alpha, a);
            if (!b0) {
                ++misses;
                continue;
            }
            const Fq beta = b0->particular + alpha.scaled(static_cast<std::uint32_t>(rng() % p));
            auto source_holds = [&](const Fq& x, const Fq& y) { return x.frobenius() * y - x * y.frobenius() == a; };
            detail::verify(source_holds(alpha, beta), "sampled point does not satisfy the source equation");

            std::vector<bool> ok;
            if (split) {
                const Fq u = alpha.pow(p - 1), v = alpha * beta;
                ok.push_back((v.pow(p) - u * u * v + a * u).is_zero());
                const Fq U = u * v - a * half, V = v;
                const Fq c = a * a * half * half;
                ok.push_back(U * U == V.pow(p + 1) + c);
                if (family == CartanFamily::SPlus) {
                    const Fq X = V * V, Y = U * V;
                    ok.push_back(Y * Y == X * (X.pow(e_half) + c));
                }
            } else {
                const Fq at = lambda * alpha + lp * beta, bt = lp * alpha + lambda * beta;
                const Fq aN = a * Nc;
                ok.push_back(aN == at.pow(p + 1) - bt.pow(p + 1));
                const Fq u1 = at.pow(p + 1), v1 = at * bt;
                ok.push_back((u1 * u1 - v1.pow(p + 1) - aN * u1).is_zero());
                const Fq U = u1 - aN * half, V = v1;
                const Fq c = (aN * half) * (aN * half);
                ok.push_back(U * U == V.pow(p + 1) + c);
                if (family == CartanFamily::NSPlus) {
                    const Fq X = V * V, Y = U * V;
                    ok.push_back(Y * Y == X * (X.pow(e_half) + c));
                }
            }
            // Random g in SL_2(F_p).
            std::uint32_t ga, gb, gc, gd;
            do {
                ga = static_cast<std::uint32_t>(rng() % p);
            } while (ga == 0);
            gb = static_cast<std::uint32_t>(rng() % p);
            gc = static_cast<std::uint32_t>(rng() % p);
            gd = mod.mul(mod.add(1, mod.mul(gb, gc)), mod.inv(ga));
            ok.push_back(source_holds(alpha.scaled(ga) + beta.scaled(gc), alpha.scaled(gb) + beta.scaled(gd)));
            const Fq mu = detail::element_of_order(F, p + 1, rng).pow(rng() % (p + 1));
            const Fq mu_inv = mu.inverse();
            ok.push_back(source_holds(mu_inv * alpha, mu_inv * beta));

            for (std::size_t i = 0; i < ok.size(); ++i) {
                if (ok[i]) {
                    ++out.steps[i].passed;
                } else if (out.passed) {
                    out.passed = false;
                    out.witness = out.steps[i].name + " fails at alpha = " + alpha.to_string() +
                                  ", beta = " + beta.to_string() + " in F_{p^" + std::to_string(2 * k) + "}";
                }
            }
            ++done;
        }
    }
    detail::verify(done == samples, "could not sample enough points within F_{p^12}");
    return out;
}

/// Result of evaluating phi on every point of P^1(F_p).
struct OrbitConstancy {
    std::size_t orbits = 0;
    std::size_t points = 0;
    bool constant = true;
    std::string witness; // first point whose value differs from its representative's
};

/// phi must be constant on each orbit of the group; checked exhaustively.
inline OrbitConstancy phi_constant_on_orbits(ExceptionalKind k, std::uint64_t p,
                                             std::optional<std::pair<ProjPoint, ProjPoint>> pair = std::nullopt) {
    const auto H = build_exceptional(k, p);
    const auto os = orbits(H);
    const auto chosen = pair ? *pair : default_orbit_pair(k, p, os);
    const auto phi = quotient_function(static_cast<std::uint32_t>(p), orbit_of(os, chosen.first), orbit_of(os, chosen.second));
    OrbitConstancy r;
    r.orbits = os.size();
    for (const auto& O : os) {
        const ProjPoint v = phi(O.representative());
        for (const auto& P : O.points) {
            ++r.points;
            if (r.constant && phi(P) != v) {
                r.constant = false;
                r.witness = "phi(" + P.to_string() + ") = " + phi(P).to_string() + " but phi(" +
                            O.representative().to_string() + ") = " + v.to_string();
            }
        }
    }
    return r;
}

} // namespace fibercurve
