#include "hfree/constructions.hpp"
#include "hfree/invariants.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hfree;

namespace {

Hypergraph k_graph(std::size_t t) { return gen_clique(2, t); }

} // namespace

TEST(Rho, GoldenValues)
{
    EXPECT_EQ(compute_rho(gen_pair_overlap(3, 2)).rho, Rational(1));
    const auto k3 = compute_rho(k_graph(3));
    EXPECT_EQ(k3.rho, Rational(2));
    EXPECT_TRUE(k3.balanced);
    const auto f3 = compute_rho(gen_Fr(3));
    EXPECT_EQ(f3.rho, Rational(3, 2));
    EXPECT_TRUE(f3.balanced);
    EXPECT_THROW(compute_rho(Hypergraph(3, 3, {{0, 1, 2}})), Error);
}

TEST(Rho, FanDensityIsROverRMinusOne)
{
    for (std::size_t r = 2; r <= 5; ++r)
        EXPECT_EQ(compute_rho(gen_Fr(r)).rho, Rational(static_cast<std::int64_t>(r), static_cast<std::int64_t>(r - 1)));
}

TEST(Rho, OverlapDensity)
{
    for (std::size_t r = 3; r <= 5; ++r)
        for (std::size_t l = 1; l < r; ++l)
            EXPECT_EQ(compute_rho(gen_pair_overlap(r, l)).rho, Rational(1, static_cast<std::int64_t>(r - l)));
}

TEST(Rho, WitnessAttainsValueWithFewestEdges)
{
    // K4 plus a pendant edge: the densest part is K4 itself
    const Hypergraph g(2, 5, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {3, 4}});
    const auto rep = compute_rho(g);
    EXPECT_EQ(rep.rho, Rational(5, 2));
    EXPECT_FALSE(rep.balanced);
    EXPECT_EQ(rep.witness.size(), 6u);
    EXPECT_EQ(rep.whole, Rational(6, 3));
}

TEST(Rho, MatchesBruteForce)
{
    std::mt19937_64 rng(3);
    int checked = 0;
    for (int i = 0; i < 60; ++i) {
        const std::size_t r = 2 + i % 2;
        const auto g = oracle::random_hypergraph(7, r, r == 2 ? 0.35 : 0.15, rng);
        if (g.num_edges() < 2 || g.num_edges() > 12)
            continue;
        const auto rep = compute_rho(g);
        EXPECT_EQ(rep.rho, oracle::rho(g)) << serialize(g);
        std::set<Vertex> span;
        for (EdgeId id : rep.witness)
            span.insert(g.edge(id).begin(), g.edge(id).end());
        EXPECT_EQ(Rational(static_cast<std::int64_t>(rep.witness.size()) - 1,
                           static_cast<std::int64_t>(span.size()) - static_cast<std::int64_t>(r)),
                  rep.rho);
        ++checked;
    }
    EXPECT_GT(checked, 30);
}

TEST(Automorphisms, GoldenValues)
{
    for (auto [r, l] : {std::pair<std::size_t, std::size_t>{3, 2}, {4, 2}, {4, 3}}) {
        const auto rep = edge_automorphisms(gen_pair_overlap(r, l));
        const double expect = factorial(l) * factorial(r - l) * factorial(r - l);
        EXPECT_EQ(static_cast<double>(rep.alpha_min), expect) << r << "," << l;
    }
    const auto f3 = gen_Fr(3);
    const auto rep = edge_automorphisms(f3);
    EXPECT_EQ(rep.alpha_min, 4u);
    const auto e0 = *f3.find_edge(Edge{2, 3, 4});
    EXPECT_EQ(rep.alpha_per_edge[e0], 12u);
    for (EdgeId id = 0; id < f3.num_edges(); ++id) {
        if (id != e0) {
            EXPECT_EQ(rep.alpha_per_edge[id], 4u);
        }
    }

    const auto matching = Hypergraph(2, 4, {{0, 1}, {2, 3}});
    for (auto a : edge_automorphisms(matching).alpha_per_edge)
        EXPECT_EQ(a, 4u);
}

TEST(Automorphisms, MatchBruteForceAndOrbitIdentity)
{
    std::mt19937_64 rng(5);
    std::vector<Hypergraph> cases{gen_Fr(3), gen_star(3, 2), gen_loose_path(3, 2), k_graph(4),
                                  gen_pair_overlap(3, 1), oracle::fano()};
    for (int i = 0; i < 15; ++i) {
        auto g = oracle::random_hypergraph(6, 2 + i % 2, 0.4, rng);
        if (g.num_edges() > 0)
            cases.push_back(std::move(g));
    }
    for (const auto& h : cases) {
        const auto rep = edge_automorphisms(h);
        EXPECT_EQ(rep.alpha_per_edge, oracle::alpha_per_edge(h)) << serialize(h);
        std::map<std::size_t, std::size_t> orbit_size;
        for (auto o : rep.edge_orbit)
            ++orbit_size[o];
        for (EdgeId id = 0; id < h.num_edges(); ++id) {
            EXPECT_EQ(rep.alpha_per_edge[id] * orbit_size[rep.edge_orbit[id]], rep.aut_order);
            EXPECT_EQ(rep.aut_order % rep.alpha_per_edge[id], 0u);
        }
    }
}

TEST(Family, Profiles)
{
    const auto rl = family_profile(gen_rl_family(3, 2));
    EXPECT_EQ(rl.rho, Rational(1));
    EXPECT_EQ(rl.s, 1u);
    EXPECT_TRUE(rl.all_balanced);
    EXPECT_TRUE(rl.dense_enough);

    std::vector<Hypergraph> fam{k_graph(4), k_graph(3)};
    const auto p = family_profile(fam);
    EXPECT_EQ(p.rho, Rational(2));
    EXPECT_EQ(p.s, 1u);
    EXPECT_EQ(p.order, (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(p.members[0].rho, Rational(5, 2));

    std::vector<Hypergraph> twice{k_graph(3), k_graph(3)};
    EXPECT_EQ(family_profile(twice).s, 2u);

    std::vector<Hypergraph> mixed{k_graph(3), gen_Fr(3)};
    EXPECT_THROW(family_profile(mixed), Error);
    EXPECT_THROW(family_profile(std::vector<Hypergraph>{}), Error);

    // rho = 1/(r-1) is not enough for r = 3, l = 1
    EXPECT_FALSE(family_profile(gen_rl_family(3, 1)).dense_enough);
}

TEST(Canonical, ExamplesAndInvariance)
{
    const auto path = gen_loose_path(3, 3);
    const auto star = gen_star(3, 3);
    EXPECT_FALSE(are_isomorphic(path, star));
    const Hypergraph relabeled(3, 7, {{4, 5, 6}, {2, 3, 4}, {0, 1, 2}});
    EXPECT_TRUE(are_isomorphic(path, relabeled));

    std::mt19937_64 rng(9);
    std::vector<Hypergraph> cases{path, star, gen_Fr(3), oracle::fano(), gen_clique(3, 5)};
    for (int i = 0; i < 10; ++i)
        cases.push_back(oracle::random_hypergraph(7, 3, 0.2, rng));
    for (const auto& h : cases) {
        const auto code = canonical_code(h);
        for (int j = 0; j < 100; ++j)
            ASSERT_EQ(canonical_code(oracle::random_relabel(h, rng)), code);
    }
}

TEST(Canonical, AgreesWithBruteForceIsomorphism)
{
    std::mt19937_64 rng(13);
    int iso = 0, non = 0;
    for (int i = 0; i < 300; ++i) {
        const auto a = oracle::random_hypergraph(6, 3, 0.12, rng);
        const auto b = i % 3 == 0 ? oracle::random_relabel(a, rng) : oracle::random_hypergraph(6, 3, 0.12, rng);
        const bool expect = oracle::isomorphic(a, b);
        EXPECT_EQ(are_isomorphic(a, b), expect) << serialize(a) << serialize(b);
        (expect ? iso : non)++;
    }
    EXPECT_GT(iso, 50);
    EXPECT_GT(non, 50);
}

TEST(Canonical, SizeCap)
{
    PatternCaps caps;
    caps.max_vertices = 5;
    EXPECT_THROW(canonical_code(oracle::fano(), caps), Error);
}
