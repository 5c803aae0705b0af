#include <gtest/gtest.h>

#include <random>

#include "fibercurve/atlas.hpp"
#include "fibercurve/projective.hpp"

using namespace fibercurve;

namespace {

ProjTransform random_transform(std::uint32_t p, std::mt19937_64& rng) {
    for (;;) {
        const auto a = rng() % p, b = rng() % p, c = rng() % p, d = rng() % p;
        if ((a * d + p * p - b * c) % p != 0) return ProjTransform(p, a, b, c, d);
    }
}

ProjPoint random_point(std::uint32_t p, std::mt19937_64& rng) {
    return ProjPoint::from_index(static_cast<std::uint32_t>(rng() % (p + 1)), p);
}

std::vector<std::uint32_t> indices(const Orbit& o, std::uint32_t p) {
    std::vector<std::uint32_t> v;
    for (const auto& P : o.points) v.push_back(P.index(p));
    return v;
}

const ProjTransform S13(13, 3, 0, -1, 9);
const ProjTransform T13(13, 0, -1, 1, 0);

} // namespace

TEST(ProjPoint, ExactlyPPlusOneValues) {
    const std::uint32_t p = 11;
    std::set<ProjPoint> all;
    for (std::uint32_t i = 0; i <= p; ++i) all.insert(ProjPoint::from_index(i, p));
    EXPECT_EQ(all.size(), p + 1);
    EXPECT_TRUE(ProjPoint::from_index(p, p).is_infinity());
    EXPECT_THROW(ProjPoint::infinity().value(), precondition_error);
}

TEST(ProjTransform, CanonicalFormIsScalarInvariant) {
    const ProjTransform g(13, 2, 4, 6, 1), h(13, 4, 8, 12, 2);
    EXPECT_EQ(g, h);
    EXPECT_EQ(g.a(), 1u);
    EXPECT_THROW(ProjTransform(13, 1, 2, 2, 4), precondition_error);
}

TEST(ProjTransform, ActExamples) {
    EXPECT_EQ(act(S13, ProjPoint::infinity()), ProjPoint::finite(10));
    EXPECT_EQ(act(T13, ProjPoint::finite(0)), ProjPoint::infinity());
    EXPECT_EQ(act(S13, ProjPoint::finite(0)), ProjPoint::finite(0));
    for (std::uint32_t i = 0; i <= 13; ++i)
        EXPECT_EQ(act(ProjTransform::identity(13), ProjPoint::from_index(i, 13)), ProjPoint::from_index(i, 13));
}

TEST(ProjTransform, ActionIsAGroupActionProperty) {
    std::mt19937_64 rng(1);
    for (std::uint32_t p : {5u, 13u, 101u, 1009u}) {
        for (int i = 0; i < 250; ++i) {
            const auto g = random_transform(p, rng), h = random_transform(p, rng);
            const auto P = random_point(p, rng);
            ASSERT_EQ(act(g * h, P), act(g, act(h, P)));
            ASSERT_EQ(act(g.inverse(), act(g, P)), P);
            ASSERT_TRUE((g * g.inverse()).is_identity());
            const auto k = random_transform(p, rng);
            ASSERT_EQ((g * h) * k, g * (h * k));
        }
    }
}

TEST(Subgroup, GenerateExamples) {
    EXPECT_EQ(generate_subgroup({ProjTransform::identity(13)}).order(), 1u);
    EXPECT_EQ(generate_subgroup({S13, T13}).order(), 12u);
    EXPECT_THROW(generate_subgroup({}), precondition_error);
    // PGL_2(F_7) has 336 elements; a cap below that must trip.
    EXPECT_THROW(generate_subgroup({ProjTransform(7, 1, 1, 0, 1), ProjTransform(7, 0, 1, 1, 0), ProjTransform(7, 3, 0, 0, 1)}, 100),
                 bound_error);
}

TEST(Subgroup, ClosureAndIdempotence) {
    std::mt19937_64 rng(2);
    for (std::uint32_t p : {7u, 11u, 13u}) {
        for (int i = 0; i < 20; ++i) {
            const auto H = generate_subgroup({random_transform(p, rng)});
            const std::uint64_t pgl = std::uint64_t{p} * (p - 1) * (p + 1);
            EXPECT_EQ(pgl % H.order(), 0u);
            for (const auto& x : H.elements()) {
                EXPECT_TRUE(H.contains(x.inverse()));
                for (const auto& y : H.elements()) ASSERT_TRUE(H.contains(x * y));
            }
            EXPECT_EQ(generate_subgroup(H.elements()).fingerprint(), H.fingerprint());
        }
    }
}

TEST(Orbits, ExamplesAtThirteen) {
    const auto triv = orbits(generate_subgroup({ProjTransform::identity(13)}));
    EXPECT_EQ(triv.size(), 14u);
    for (const auto& o : triv) EXPECT_EQ(o.isotropy, 1u);

    const auto os = orbits(generate_subgroup({S13, T13}));
    ASSERT_EQ(os.size(), 3u);
    EXPECT_EQ(indices(os[0], 13), (std::vector<std::uint32_t>{0, 9, 10, 13}));
    EXPECT_EQ(os[0].isotropy, 3u);
    EXPECT_EQ(indices(os[1], 13), (std::vector<std::uint32_t>{1, 2, 6, 12}));
    EXPECT_EQ(os[1].isotropy, 3u);
    EXPECT_EQ(indices(os[2], 13), (std::vector<std::uint32_t>{3, 4, 5, 7, 8, 11}));
    EXPECT_EQ(os[2].isotropy, 2u);
}

TEST(Orbits, PartitionAndConjugationInvariance) {
    std::mt19937_64 rng(3);
    for (std::uint32_t p : {11u, 13u, 29u, 61u, 97u}) {
        for (int i = 0; i < 10; ++i) {
            const auto H = generate_subgroup({random_transform(p, rng)});
            const auto g = random_transform(p, rng);
            std::vector<ProjTransform> conj;
            for (const auto& h : H.generators()) conj.push_back(g * h * g.inverse());
            const auto K = generate_subgroup(conj);
            auto profile = [](const std::vector<Orbit>& os) {
                std::vector<std::pair<std::size_t, std::size_t>> v;
                std::size_t total = 0;
                for (const auto& o : os) {
                    v.emplace_back(o.size(), o.isotropy);
                    total += o.size();
                }
                std::sort(v.begin(), v.end());
                return std::make_pair(total, v);
            };
            const auto a = profile(orbits(H)), b = profile(orbits(K));
            EXPECT_EQ(a.first, p + 1u);
            EXPECT_EQ(a, b);
        }
    }
}

TEST(Cosets, IdentityGivesIndexCycles) {
    const auto G = generate_subgroup({ProjTransform(13, 1, 1, 0, 1), ProjTransform(13, 0, -1, 1, 0)});
    EXPECT_EQ(G.order(), 1092u);
    const auto H = generate_subgroup({S13, T13});
    EXPECT_EQ(coset_cycle_counts(G, H, ProjTransform::identity(13)), G.order() / H.order());
    EXPECT_THROW(coset_cycle_counts(H, G, S13), precondition_error);
}

TEST(Cosets, CycleCountIndependentOfRepresentatives) {
    // Conjugate elements induce conjugate permutations, so cycle counts agree.
    std::mt19937_64 rng(4);
    const std::uint32_t p = 17;
    const auto G = restrict_to_psl2(generate_subgroup({ProjTransform(p, 1, 1, 0, 1), ProjTransform(p, 0, -1, 1, 0)}));
    const auto H = restrict_to_psl2(cartan_subgroup(CartanFamily::NSPlus, p));
    for (int i = 0; i < 200; ++i) {
        const auto& g = G.elements()[rng() % G.order()];
        const auto& x = G.elements()[rng() % G.order()];
        ASSERT_EQ(coset_cycle_counts(G, H, g), coset_cycle_counts(G, H, x * g * x.inverse()));
    }
}

TEST(Cosets, NonsplitNormalizerCyclesGiveGenus) {
    // Riemann-Hurwitz from cycle counts of elements of order 2, 3, p.
    for (auto [p, genus] : std::vector<std::pair<std::uint32_t, std::int64_t>>{{13, 3}, {17, 6}}) {
        const auto G = restrict_to_psl2(generate_subgroup({ProjTransform(p, 1, 1, 0, 1), ProjTransform(p, 0, -1, 1, 0)}));
        const auto H = restrict_to_psl2(cartan_subgroup(CartanFamily::NSPlus, p));
        const ProjTransform s(p, 0, -1, 1, 0), t(p, 1, 1, 0, 1);
        const auto n = static_cast<std::int64_t>(G.order() / H.order());
        const auto c2 = static_cast<std::int64_t>(coset_cycle_counts(G, H, s));
        const auto c3 = static_cast<std::int64_t>(coset_cycle_counts(G, H, s * t));
        const auto cp = static_cast<std::int64_t>(coset_cycle_counts(G, H, t));
        EXPECT_EQ(2 * genus - 2, -2 * n + (n - c2) + (n - c3) + (n - cp)) << p;
    }
}
