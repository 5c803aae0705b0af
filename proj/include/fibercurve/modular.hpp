#pragma once

/**
 * @file modular.hpp
 * @brief Integer and residue arithmetic shared by every other module.
 *
 * Everything here works on plain 64-bit integers.  Residues mod p are
 * kept in [0, p) as std::uint32_t; p itself is bounded by kMaxPrime.
 */

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "error.hpp"

namespace fibercurve {

/// Largest characteristic accepted anywhere in the library.
inline constexpr std::uint64_t kMaxPrime = (std::uint64_t{1} << 20) - 1;

inline std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

inline std::uint64_t powmod64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod64(r, base, m);
        base = mulmod64(base, base, m);
        exp >>= 1;
    }
    return r;
}

/// Deterministic Miller-Rabin, exact for every 64-bit input.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod64(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Least positive r with a*r = 1 (mod m).  Throws when gcd(a, m) != 1.
inline std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
    detail::require(m >= 2, "inverse_mod: modulus must be >= 2");
    std::int64_t r0 = m, r1 = ((a % m) + m) % m;
    std::int64_t s0 = 0, s1 = 1;
    while (r1 != 0) {
        std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    if (r0 != 1) {
        throw precondition_error("inverse_mod: " + std::to_string(a) + " is not invertible modulo " +
                                 std::to_string(m));
    }
    return ((s0 % m) + m) % m;
}

/// Distinct prime factors in increasing order (trial division).
inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            out.push_back(q);
            while (n % q == 0) n /= q;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

/// Validates p as a prime > 3 within kMaxPrime.
inline void require_prime(std::uint64_t p) {
    if (p > kMaxPrime) throw bound_error("prime " + std::to_string(p) + " exceeds the supported bound 2^20");
    if (!is_prime(p)) throw precondition_error(std::to_string(p) + " is not prime");
    if (p <= 3) throw precondition_error("p must be a prime > 3, got " + std::to_string(p));
}

/// Residue arithmetic for one fixed odd prime.  Reduction uses Lemire's
/// fastmod when p < 2^16 (all products then fit in 32 bits).
class Modulus {
public:
    explicit Modulus(std::uint32_t p)
        : p_(p), fast_(p < (1u << 16)), m_(fast_ ? ~std::uint64_t{0} / p + 1 : 0) {}

    std::uint32_t p() const { return p_; }

    std::uint32_t reduce(std::uint64_t x) const {
        if (fast_ && x < (std::uint64_t{1} << 32)) {
            std::uint64_t low = m_ * x;
            return static_cast<std::uint32_t>((static_cast<unsigned __int128>(low) * p_) >> 64);
        }
        return static_cast<std::uint32_t>(x % p_);
    }

    std::uint32_t from_signed(std::int64_t x) const {
        std::int64_t r = x % static_cast<std::int64_t>(p_);
        return static_cast<std::uint32_t>(r < 0 ? r + p_ : r);
    }

    std::uint32_t add(std::uint32_t a, std::uint32_t b) const {
        std::uint32_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    std::uint32_t sub(std::uint32_t a, std::uint32_t b) const { return a >= b ? a - b : a + p_ - b; }
    std::uint32_t neg(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const {
        return reduce(static_cast<std::uint64_t>(a) * b);
    }
    std::uint32_t pow(std::uint32_t a, std::uint64_t e) const {
        return static_cast<std::uint32_t>(powmod64(a, e, p_));
    }
    std::uint32_t inv(std::uint32_t a) const {
        detail::require(a % p_ != 0, "division by zero modulo " + std::to_string(p_));
        return static_cast<std::uint32_t>(inverse_mod(a, p_));
    }
    bool is_square(std::uint32_t a) const { return a == 0 || pow(a, (p_ - 1) / 2) == 1; }

private:
    std::uint32_t p_;
    bool fast_;
    std::uint64_t m_;
};

/// Smallest quadratic non-residue modulo an odd prime.
inline std::uint32_t smallest_nonresidue(const Modulus& mod) {
    for (std::uint32_t d = 2; d < mod.p(); ++d) {
        if (!mod.is_square(d)) return d;
    }
    throw precondition_error("no quadratic non-residue modulo " + std::to_string(mod.p()));
}

/// Smallest generator of (Z/pZ)^*.
inline std::uint32_t primitive_root(const Modulus& mod) {
    const auto factors = prime_factors(mod.p() - 1);
    for (std::uint32_t g = 2; g < mod.p(); ++g) {
        bool ok = true;
        for (auto q : factors) {
            if (mod.pow(g, (mod.p() - 1) / q) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    return 1; // p == 2
}

} // namespace fibercurve
