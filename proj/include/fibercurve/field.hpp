#pragma once

/**
 * @file field.hpp
 * @brief Finite fields F_{p^k}, their elements, and dense univariate polynomials.
 *
 * A field is identified by (p, k) and realised as F_p[x]/(f) where f is the
 * smallest monic irreducible polynomial of degree k, comparing coefficient
 * vectors (c_0, ..., c_{k-1}) lexicographically.  Fields are interned: two
 * calls to Field::create with the same arguments return handles to the same
 * immutable description, so elements can carry a plain pointer as field id.
 *
 * Element order is lexicographic on coordinate vectors (c_0 most
 * significant); Fq::index() is the rank of an element in that order.
 */

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "modular.hpp"

namespace fibercurve {

inline constexpr int kMaxExtensionDegree = 12;
/// Largest field order accepted by Field::create.
inline constexpr std::uint64_t kMaxFieldOrder = std::uint64_t{1} << 62;
/// Largest field order for which Field::elements() will enumerate.
inline constexpr std::uint64_t kMaxEnumeration = 20'000'000;

class Fq;
class FqPoly;

namespace detail {

struct FieldData {
    std::uint32_t p;
    int k;
    Modulus mod;
    std::uint64_t order;
    // Monic defining polynomial, low degree first; modulus[k] == 1.
    std::array<std::uint32_t, kMaxExtensionDegree + 1> modulus{};
};

std::uint64_t checked_power(std::uint64_t p, int k);

} // namespace detail

class Field {
public:
    /// Creates (or returns the interned) field with p^k elements.
    static Field create(std::uint64_t p, int k = 1);

    std::uint32_t characteristic() const { return data_->p; }
    int degree() const { return data_->k; }
    std::uint64_t order() const { return data_->order; }
    const Modulus& modulus() const { return data_->mod; }
    std::span<const std::uint32_t> defining_polynomial() const {
        return {data_->modulus.data(), static_cast<std::size_t>(data_->k) + 1};
    }

    Fq zero() const;
    Fq one() const;
    Fq from_int(std::int64_t v) const;
    Fq from_coords(std::span<const std::uint32_t> coords) const;
    Fq from_index(std::uint64_t index) const;
    /// The class of x in F_p[x]/(f); for k == 1 the smallest primitive root.
    Fq adjoined_root() const;
    /// All elements in canonical order.  Throws bound_error above kMaxEnumeration.
    std::vector<Fq> elements() const;

    bool operator==(const Field& other) const { return data_ == other.data_; }

    const detail::FieldData* id() const { return data_; }

private:
    explicit Field(const detail::FieldData* d) : data_(d) {}
    friend class Fq;
    const detail::FieldData* data_;
};

class Fq {
public:
    Fq() = default;

    Field field() const { return Field(f_); }
    std::span<const std::uint32_t> coords() const { return {c_.data(), static_cast<std::size_t>(f_->k)}; }
    std::uint32_t coord(int i) const { return c_[static_cast<std::size_t>(i)]; }

    std::uint64_t index() const {
        std::uint64_t r = 0;
        for (int i = 0; i < f_->k; ++i) r = r * f_->p + c_[static_cast<std::size_t>(i)];
        return r;
    }

    bool is_zero() const {
        for (int i = 0; i < f_->k; ++i)
            if (c_[static_cast<std::size_t>(i)]) return false;
        return true;
    }
    bool is_one() const {
        if (c_[0] != 1) return false;
        for (int i = 1; i < f_->k; ++i)
            if (c_[static_cast<std::size_t>(i)]) return false;
        return true;
    }
    bool in_prime_field() const {
        for (int i = 1; i < f_->k; ++i)
            if (c_[static_cast<std::size_t>(i)]) return false;
        return true;
    }
    /// Value in [0, p) when the element lies in the prime field.
    std::uint32_t residue() const {
        detail::require(in_prime_field(), "element is not in the prime field");
        return c_[0];
    }

    friend Fq operator+(const Fq& a, const Fq& b) {
        Fq r(a.f_);
        for (int i = 0; i < a.f_->k; ++i) {
            auto u = static_cast<std::size_t>(i);
            r.c_[u] = a.f_->mod.add(a.c_[u], b.c_[u]);
        }
        return r;
    }
    friend Fq operator-(const Fq& a, const Fq& b) {
        Fq r(a.f_);
        for (int i = 0; i < a.f_->k; ++i) {
            auto u = static_cast<std::size_t>(i);
            r.c_[u] = a.f_->mod.sub(a.c_[u], b.c_[u]);
        }
        return r;
    }
    Fq operator-() const {
        Fq r(f_);
        for (int i = 0; i < f_->k; ++i) {
            auto u = static_cast<std::size_t>(i);
            r.c_[u] = f_->mod.neg(c_[u]);
        }
        return r;
    }
    friend Fq operator*(const Fq& a, const Fq& b);
    friend Fq operator/(const Fq& a, const Fq& b) { return a * b.inverse(); }
    Fq& operator+=(const Fq& o) { return *this = *this + o; }
    Fq& operator-=(const Fq& o) { return *this = *this - o; }
    Fq& operator*=(const Fq& o) { return *this = *this * o; }

    Fq scaled(std::uint32_t s) const {
        Fq r(f_);
        for (int i = 0; i < f_->k; ++i) {
            auto u = static_cast<std::size_t>(i);
            r.c_[u] = f_->mod.mul(c_[u], s);
        }
        return r;
    }

    Fq pow(std::uint64_t e) const {
        Fq r = field().one();
        Fq b = *this;
        while (e) {
            if (e & 1) r *= b;
            b *= b;
            e >>= 1;
        }
        return r;
    }
    Fq inverse() const {
        detail::require(!is_zero(), "inverse of zero in F_q");
        return pow(f_->order - 2);
    }
    Fq frobenius() const { return pow(f_->p); }

    friend bool operator==(const Fq& a, const Fq& b) {
        if (a.f_ != b.f_) return false;
        for (int i = 0; i < a.f_->k; ++i) {
            auto u = static_cast<std::size_t>(i);
            if (a.c_[u] != b.c_[u]) return false;
        }
        return true;
    }
    friend std::strong_ordering operator<=>(const Fq& a, const Fq& b) { return a.index() <=> b.index(); }

    std::string to_string() const;

private:
    explicit Fq(const detail::FieldData* f) : f_(f) {}
    friend class Field;
    const detail::FieldData* f_ = nullptr;
    std::array<std::uint32_t, kMaxExtensionDegree> c_{};
};

inline Fq operator*(const Fq& a, const Fq& b) {
    const auto* f = a.f_;
    const int k = f->k;
    Fq r(f);
    if (k == 1) {
        r.c_[0] = f->mod.mul(a.c_[0], b.c_[0]);
        return r;
    }
    std::array<std::uint64_t, 2 * kMaxExtensionDegree> acc{};
    for (int i = 0; i < k; ++i) {
        if (!a.c_[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < k; ++j) {
            acc[static_cast<std::size_t>(i + j)] +=
                static_cast<std::uint64_t>(a.c_[static_cast<std::size_t>(i)]) * b.c_[static_cast<std::size_t>(j)];
        }
    }
    std::array<std::uint32_t, 2 * kMaxExtensionDegree> red{};
    for (int i = 0; i < 2 * k - 1; ++i) red[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(acc[static_cast<std::size_t>(i)] % f->p);
    for (int i = 2 * k - 2; i >= k; --i) {
        const std::uint32_t t = red[static_cast<std::size_t>(i)];
        if (!t) continue;
        for (int j = 0; j < k; ++j) {
            auto u = static_cast<std::size_t>(i - k + j);
            red[u] = f->mod.sub(red[u], f->mod.mul(t, f->modulus[static_cast<std::size_t>(j)]));
        }
    }
    for (int i = 0; i < k; ++i) r.c_[static_cast<std::size_t>(i)] = red[static_cast<std::size_t>(i)];
    return r;
}

inline std::string Fq::to_string() const {
    if (f_->k == 1) return std::to_string(c_[0]);
    std::string s = "(";
    for (int i = 0; i < f_->k; ++i) {
        if (i) s += ",";
        s += std::to_string(c_[static_cast<std::size_t>(i)]);
    }
    return s + ")";
}

/// Dense univariate polynomial over a finite field, low degree first.
/// The zero polynomial has no coefficients and degree -1.
class FqPoly {
public:
    explicit FqPoly(Field f) : field_(f) {}
    FqPoly(Field f, std::vector<Fq> coeffs) : field_(f), c_(std::move(coeffs)) { normalize(); }

    static FqPoly constant(const Fq& c) { return FqPoly(c.field(), {c}); }
    /// The monic linear polynomial t - root.
    static FqPoly linear(const Fq& root) { return FqPoly(root.field(), {-root, root.field().one()}); }
    static FqPoly monomial(Field f, std::size_t degree) {
        std::vector<Fq> c(degree + 1, f.zero());
        c.back() = f.one();
        return FqPoly(f, std::move(c));
    }

    const Field& field() const { return field_; }
    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<Fq>& coeffs() const { return c_; }
    Fq coeff(std::size_t i) const { return i < c_.size() ? c_[i] : field_.zero(); }
    Fq leading() const { return c_.empty() ? field_.zero() : c_.back(); }

    Fq operator()(const Fq& x) const {
        Fq r = field_.zero();
        for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
        return r;
    }

    friend FqPoly operator+(const FqPoly& a, const FqPoly& b) {
        std::vector<Fq> c(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return FqPoly(a.field_, std::move(c));
    }
    friend FqPoly operator-(const FqPoly& a, const FqPoly& b) {
        std::vector<Fq> c(std::max(a.c_.size(), b.c_.size()), a.field_.zero());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) - b.coeff(i);
        return FqPoly(a.field_, std::move(c));
    }
    friend FqPoly operator*(const FqPoly& a, const FqPoly& b) {
        if (a.is_zero() || b.is_zero()) return FqPoly(a.field_);
        std::vector<Fq> c(a.c_.size() + b.c_.size() - 1, a.field_.zero());
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
        return FqPoly(a.field_, std::move(c));
    }
    friend bool operator==(const FqPoly& a, const FqPoly& b) { return a.field_ == b.field_ && a.c_ == b.c_; }

    /// Quotient and remainder; divisor must be nonzero.
    std::pair<FqPoly, FqPoly> divmod(const FqPoly& d) const {
        detail::require(!d.is_zero(), "polynomial division by zero");
        if (degree() < d.degree()) return {FqPoly(field_), *this};
        std::vector<Fq> rem = c_;
        std::vector<Fq> quo(c_.size() - d.c_.size() + 1, field_.zero());
        const Fq lead_inv = d.leading().inverse();
        for (std::size_t i = rem.size(); i-- >= d.c_.size();) {
            const Fq t = rem[i] * lead_inv;
            if (t.is_zero()) continue;
            const std::size_t shift = i - (d.c_.size() - 1);
            quo[shift] = t;
            for (std::size_t j = 0; j < d.c_.size(); ++j) rem[shift + j] -= t * d.c_[j];
        }
        rem.resize(d.c_.size() - 1, field_.zero());
        return {FqPoly(field_, std::move(quo)), FqPoly(field_, std::move(rem))};
    }
    FqPoly operator%(const FqPoly& d) const { return divmod(d).second; }

    FqPoly monic() const {
        if (is_zero()) return *this;
        const Fq inv = leading().inverse();
        std::vector<Fq> c = c_;
        for (auto& x : c) x *= inv;
        return FqPoly(field_, std::move(c));
    }

    /// (*this)^e mod m.
    FqPoly powmod(std::uint64_t e, const FqPoly& m) const {
        FqPoly result = FqPoly::constant(field_.one()) % m;
        FqPoly base = *this % m;
        while (e) {
            if (e & 1) result = (result * base) % m;
            base = (base * base) % m;
            e >>= 1;
        }
        return result;
    }

    friend FqPoly gcd(FqPoly a, FqPoly b) {
        while (!b.is_zero()) {
            FqPoly r = a % b;
            a = std::move(b);
            b = std::move(r);
        }
        return a.monic();
    }

private:
    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }
    Field field_;
    std::vector<Fq> c_;
};

namespace detail {

inline std::uint64_t checked_power(std::uint64_t p, int k) {
    unsigned __int128 r = 1;
    for (int i = 0; i < k; ++i) {
        r *= p;
        if (r > kMaxFieldOrder) throw bound_error("field order p^k exceeds 2^62");
    }
    return static_cast<std::uint64_t>(r);
}

/// Rabin's irreducibility test for a monic polynomial over a prime field.
inline bool is_irreducible(const FqPoly& f) {
    const int k = f.degree();
    if (k < 1) return false;
    if (k == 1) return true;
    const Field& F = f.field();
    const std::uint64_t p = F.characteristic();
    const FqPoly x = FqPoly::monomial(F, 1);
    // frob[j] = x^{p^j} mod f
    std::vector<FqPoly> frob{x % f};
    for (int j = 1; j <= k; ++j) frob.push_back(frob.back().powmod(p, f));
    if (!((frob[static_cast<std::size_t>(k)] - x) % f).is_zero()) return false;
    for (auto r : prime_factors(static_cast<std::uint64_t>(k))) {
        const FqPoly g = gcd(f, frob[static_cast<std::size_t>(k / static_cast<int>(r))] - x);
        if (g.degree() != 0) return false;
    }
    return true;
}

inline std::recursive_mutex& field_registry_mutex() {
    static std::recursive_mutex m;
    return m;
}

inline std::map<std::pair<std::uint64_t, int>, std::unique_ptr<FieldData>>& field_registry() {
    static std::map<std::pair<std::uint64_t, int>, std::unique_ptr<FieldData>> reg;
    return reg;
}

} // namespace detail

inline Field Field::create(std::uint64_t p, int k) {
    require_prime(p);
    detail::require(k >= 1 && k <= kMaxExtensionDegree,
                    "extension degree must lie in [1, " + std::to_string(kMaxExtensionDegree) + "]");
    const std::uint64_t order = detail::checked_power(p, k);

    std::lock_guard lock(detail::field_registry_mutex());
    auto& reg = detail::field_registry();
    if (auto it = reg.find({p, k}); it != reg.end()) return Field(it->second.get());

    auto data = std::make_unique<detail::FieldData>(
        detail::FieldData{static_cast<std::uint32_t>(p), k, Modulus(static_cast<std::uint32_t>(p)), order, {}});
    if (k == 1) {
        data->modulus[0] = 0;
        data->modulus[1] = 1;
    } else {
        const Field base = Field::create(p, 1);
        // Lexicographic scan over (c_0, ..., c_{k-1}) with c_0 most significant.
        // c_0 = 0 is never irreducible, so start at the first index with c_0 = 1.
        const std::uint64_t count = detail::checked_power(p, k);
        bool found = false;
        for (std::uint64_t idx = count / p; idx < count && !found; ++idx) {
            std::vector<std::uint32_t> c(static_cast<std::size_t>(k));
            std::uint64_t t = idx;
            for (int i = k - 1; i >= 0; --i) {
                c[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(t % p);
                t /= p;
            }
            if (c[0] == 0) continue;
            std::vector<Fq> coeffs;
            for (auto v : c) coeffs.push_back(base.from_int(v));
            coeffs.push_back(base.one());
            if (detail::is_irreducible(FqPoly(base, coeffs))) {
                for (int i = 0; i < k; ++i) data->modulus[static_cast<std::size_t>(i)] = c[static_cast<std::size_t>(i)];
                data->modulus[static_cast<std::size_t>(k)] = 1;
                found = true;
            }
        }
        detail::verify(found, "no irreducible polynomial found");
    }
    const detail::FieldData* raw = data.get();
    reg.emplace(std::pair{p, k}, std::move(data));
    return Field(raw);
}

inline Fq Field::zero() const { return Fq(data_); }
inline Fq Field::one() const {
    Fq r(data_);
    r.c_[0] = 1;
    return r;
}
inline Fq Field::from_int(std::int64_t v) const {
    Fq r(data_);
    r.c_[0] = data_->mod.from_signed(v);
    return r;
}
inline Fq Field::from_coords(std::span<const std::uint32_t> coords) const {
    detail::require(coords.size() <= static_cast<std::size_t>(data_->k), "too many coordinates for field");
    Fq r(data_);
    for (std::size_t i = 0; i < coords.size(); ++i) r.c_[i] = coords[i] % data_->p;
    return r;
}
inline Fq Field::from_index(std::uint64_t index) const {
    detail::require(index < data_->order, "element index out of range");
    Fq r(data_);
    for (int i = data_->k - 1; i >= 0; --i) {
        r.c_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(index % data_->p);
        index /= data_->p;
    }
    return r;
}
inline Fq Field::adjoined_root() const {
    if (data_->k == 1) return from_int(primitive_root(data_->mod));
    Fq r(data_);
    r.c_[1] = 1;
    return r;
}
inline std::vector<Fq> Field::elements() const {
    if (data_->order > kMaxEnumeration) throw bound_error("field too large to enumerate");
    std::vector<Fq> out;
    out.reserve(data_->order);
    for (std::uint64_t i = 0; i < data_->order; ++i) out.push_back(from_index(i));
    return out;
}

/// Square root with the smaller canonical index, or nullopt for non-squares.
/// Tonelli-Shanks over F_q; the returned r always satisfies r*r == a.
inline std::optional<Fq> sqrt_in_field(const Fq& a) {
    if (a.is_zero()) return a;
    const Field F = a.field();
    const std::uint64_t q = F.order();
    if (!a.pow((q - 1) / 2).is_one()) return std::nullopt;

    std::uint64_t t = q - 1;
    int s = 0;
    while ((t & 1) == 0) {
        t >>= 1;
        ++s;
    }
    Fq z = F.one();
    for (std::uint64_t i = 2; i < q; ++i) {
        z = F.from_index(i);
        if (!z.pow((q - 1) / 2).is_one()) break;
    }
    Fq c = z.pow(t);
    Fq x = a.pow((t + 1) / 2);
    Fq b = a.pow(t);
    int m = s;
    while (!b.is_one()) {
        int i = 0;
        Fq bb = b;
        while (!bb.is_one()) {
            bb *= bb;
            ++i;
        }
        Fq w = c;
        for (int j = 0; j < m - i - 1; ++j) w *= w;
        x *= w;
        c = w * w;
        b *= c;
        m = i;
    }
    detail::verify(x * x == a, "sqrt_in_field: root check failed");
    const Fq other = -x;
    return other.index() < x.index() ? other : x;
}

} // namespace fibercurve
