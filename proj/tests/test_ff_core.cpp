#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fibercurve/field.hpp"
#include "fibercurve/modular.hpp"

using namespace fibercurve;

TEST(Modular, PrimalityMatchesTrialDivision) {
    for (std::uint64_t n = 0; n < 5000; ++n) {
        bool prime = n >= 2;
        for (std::uint64_t d = 2; d * d <= n && prime; ++d)
            if (n % d == 0) prime = false;
        EXPECT_EQ(is_prime(n), prime) << n;
    }
    EXPECT_TRUE(is_prime(1048573));
    EXPECT_FALSE(is_prime(1048575));
}

TEST(Modular, InverseModExamples) {
    EXPECT_EQ(inverse_mod(3, 7), 5);
    EXPECT_EQ(inverse_mod(4, 37), 28);
    EXPECT_EQ(inverse_mod(1, 2), 1);
    EXPECT_EQ(inverse_mod(1, 999), 1);
    EXPECT_EQ(inverse_mod(2, 211), 106);
    EXPECT_EQ(inverse_mod(-3, 7), 2);
    EXPECT_THROW(inverse_mod(2, 4), precondition_error);
    EXPECT_THROW(inverse_mod(3, 1), precondition_error);
}

TEST(Modular, InverseModAllCoprimePairsUpTo1000) {
    for (std::int64_t m = 2; m <= 1000; ++m)
        for (std::int64_t a = 1; a < m; ++a) {
            if (std::gcd(a, m) != 1) continue;
            const auto r = inverse_mod(a, m);
            ASSERT_GE(r, 1);
            ASSERT_LT(r, m);
            ASSERT_EQ(a * r % m, 1) << a << " mod " << m;
        }
}

TEST(Modular, RequirePrimeRejects) {
    EXPECT_THROW(require_prime(15), precondition_error);
    EXPECT_THROW(require_prime(3), precondition_error);
    EXPECT_THROW(require_prime(kMaxPrime + 2), bound_error);
    EXPECT_NO_THROW(require_prime(13));
}

TEST(Field, CreateExamples) {
    const Field f13 = Field::create(13, 1);
    EXPECT_EQ(f13.order(), 13u);
    const Field f169 = Field::create(13, 2);
    EXPECT_EQ(f169.order(), 169u);
    // Frobenius has order exactly 2 on F_169.
    bool nontrivial = false;
    for (const auto& x : f169.elements()) {
        EXPECT_EQ(x.frobenius().frobenius(), x);
        if (x.frobenius() != x) nontrivial = true;
    }
    EXPECT_TRUE(nontrivial);
    EXPECT_EQ(Field::create(5, 2).order(), 25u);
    EXPECT_THROW(Field::create(15, 1), precondition_error);
    EXPECT_THROW(Field::create(1048573, 4), bound_error);
}

TEST(Field, InterningGivesSameHandle) {
    EXPECT_TRUE(Field::create(31, 3) == Field::create(31, 3));
    EXPECT_FALSE(Field::create(31, 3) == Field::create(31, 2));
}

// Degree 2 and 3 polynomials are irreducible iff they have no root, which
// gives an oracle independent of Rabin's test.
TEST(Field, DefiningPolynomialIsSmallestRootFree) {
    for (std::uint32_t p : {5u, 7u, 11u, 13u, 17u}) {
        for (int k : {2, 3}) {
            const auto f = Field::create(p, k).defining_polynomial();
            std::vector<std::uint32_t> expected;
            const std::uint64_t count = static_cast<std::uint64_t>(std::pow(p, k));
            for (std::uint64_t idx = 0; idx < count && expected.empty(); ++idx) {
                std::vector<std::uint32_t> c(k);
                std::uint64_t t = idx;
                for (int i = k - 1; i >= 0; --i) {
                    c[i] = static_cast<std::uint32_t>(t % p);
                    t /= p;
                }
                bool root = false;
                for (std::uint64_t x = 0; x < p && !root; ++x) {
                    std::uint64_t v = 1;
                    for (int i = k - 1; i >= 0; --i) v = (v * x + c[i]) % p;
                    root = v == 0;
                }
                if (!root) expected = c;
            }
            ASSERT_EQ(f.size(), static_cast<std::size_t>(k) + 1);
            EXPECT_EQ(f[k], 1u);
            for (int i = 0; i < k; ++i) EXPECT_EQ(f[i], expected[i]) << "p=" << p << " k=" << k;
        }
    }
}

TEST(Field, FrobeniusAdditiveAndFixesPrimeField) {
    const std::vector<std::pair<std::uint64_t, int>> fields{{5, 1}, {5, 2}, {5, 3}, {5, 4}, {5, 5},
                                                            {7, 2}, {7, 4}, {13, 2}, {97, 2}, {19, 3}};
    for (auto [p, k] : fields) {
        const Field F = Field::create(p, k);
        const auto el = F.elements();
        ASSERT_LE(F.order(), 10000u);
        std::size_t fixed = 0;
        for (const auto& x : el) {
            if (x.frobenius() == x) {
                ++fixed;
                EXPECT_TRUE(x.in_prime_field());
            }
        }
        EXPECT_EQ(fixed, p);
        std::mt19937_64 rng(p * 31 + k);
        for (int i = 0; i < 300; ++i) {
            const auto& x = el[rng() % el.size()];
            const auto& y = el[rng() % el.size()];
            ASSERT_EQ((x + y).frobenius(), x.frobenius() + y.frobenius());
            ASSERT_EQ((x * y).frobenius(), x.frobenius() * y.frobenius());
        }
    }
}

TEST(Field, FieldAxiomsOnRandomTriples) {
    const Field F = Field::create(11, 3);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
        const Fq x = F.from_index(rng() % F.order()), y = F.from_index(rng() % F.order()),
                 z = F.from_index(rng() % F.order());
        ASSERT_EQ(x * (y + z), x * y + x * z);
        ASSERT_EQ((x * y) * z, x * (y * z));
        ASSERT_EQ(x + (-x), F.zero());
        if (!x.is_zero()) {
            ASSERT_EQ(x * x.inverse(), F.one());
        }
    }
}

TEST(Field, SqrtExamples) {
    const Field F = Field::create(73, 1);
    EXPECT_EQ(sqrt_in_field(F.from_int(2))->coord(0), 32u);
    EXPECT_EQ(sqrt_in_field(F.from_int(-1))->coord(0), 27u);
    EXPECT_TRUE(sqrt_in_field(F.zero())->is_zero());
    EXPECT_FALSE(sqrt_in_field(F.from_int(5)).has_value());
}

TEST(Field, SqrtExistsForExactlyHalfPlusOne) {
    for (auto [p, k] : std::vector<std::pair<std::uint64_t, int>>{{5, 2}, {7, 3}, {13, 2}, {101, 1}, {97, 2}, {5, 5}}) {
        const Field F = Field::create(p, k);
        std::uint64_t found = 0;
        for (const auto& a : F.elements()) {
            if (auto r = sqrt_in_field(a)) {
                ++found;
                ASSERT_EQ(*r * *r, a);
                // the returned root is the one with smaller canonical index
                ASSERT_LE(r->index(), (-*r).index());
            }
        }
        EXPECT_EQ(found, (F.order() + 1) / 2) << p << "^" << k;
    }
}

TEST(FieldPoly, EvaluationIsRingHomomorphism) {
    const Field F = Field::create(7, 2);
    std::mt19937_64 rng(42);
    auto rand_el = [&] { return F.from_index(rng() % F.order()); };
    auto rand_poly = [&] {
        std::vector<Fq> c;
        const int d = static_cast<int>(rng() % 7);
        for (int i = 0; i <= d; ++i) c.push_back(rand_el());
        return FqPoly(F, c);
    };
    for (int i = 0; i < 300; ++i) {
        const FqPoly f = rand_poly(), g = rand_poly();
        const Fq x = rand_el();
        ASSERT_EQ((f * g)(x), f(x) * g(x));
        ASSERT_EQ((f + g)(x), f(x) + g(x));
        if (!f.is_zero() && !g.is_zero()) {
            ASSERT_EQ((f * g).degree(), f.degree() + g.degree());
        }
        if (!f.is_zero()) {
            ASSERT_FALSE(f.leading().is_zero());
        }
    }
}
