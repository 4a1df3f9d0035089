#include "hfree/constructions.hpp"
#include "hfree/embeddings.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hfree;

namespace {

Hypergraph cycle(std::size_t n)
{
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v)
        edges.push_back({v, static_cast<Vertex>((v + 1) % n)});
    return Hypergraph(2, n, std::move(edges));
}

bool is_valid_copy(const Hypergraph& g, const Hypergraph& h, const Copy& c)
{
    if (c.edges.size() != h.num_edges() || !std::is_sorted(c.edges.begin(), c.edges.end()))
        return false;
    return oracle::isomorphic(copy_as_hypergraph(g, c), compact(h));
}

} // namespace

TEST(Enumerate, Examples)
{
    const auto k4 = gen_clique(2, 4);
    const auto k3 = gen_clique(2, 3);
    EXPECT_EQ(enumerate_copies(k4, k3).size(), 4u);
    EXPECT_TRUE(enumerate_copies(cycle(5), k3).empty());
    EXPECT_EQ(enumerate_copies(gen_clique(3, 4), gen_pair_overlap(3, 2)).size(), 6u);
    EXPECT_EQ(enumerate_copies(k4, k3, 2).size(), 2u);
}

TEST(Enumerate, CopiesAreValidAndDistinct)
{
    std::mt19937_64 rng(21);
    const std::vector<Hypergraph> patterns{gen_pair_overlap(3, 2), gen_pair_overlap(3, 1), gen_loose_path(3, 2),
                                           gen_Fr(3)};
    for (int i = 0; i < 10; ++i) {
        const auto g = oracle::random_hypergraph(8, 3, 0.25, rng);
        for (const auto& h : patterns) {
            const auto copies = enumerate_copies(g, h);
            std::set<std::vector<EdgeId>> seen;
            for (const auto& c : copies) {
                EXPECT_TRUE(is_valid_copy(g, h, c));
                EXPECT_TRUE(seen.insert(c.edges).second);
            }
        }
    }
}

TEST(Enumerate, CountsMatchBruteForceOverEdgeSubsets)
{
    std::mt19937_64 rng(22);
    const auto h = gen_loose_path(2, 3);   // path with 3 edges
    for (int i = 0; i < 10; ++i) {
        const auto g = oracle::random_hypergraph(6, 2, 0.5, rng);
        std::size_t expect = 0;
        const std::size_t m = g.num_edges();
        for (std::uint32_t s = 0; s < (1u << m); ++s) {
            if (__builtin_popcount(s) != 3)
                continue;
            std::vector<Edge> es;
            for (std::size_t j = 0; j < m; ++j)
                if (s >> j & 1)
                    es.push_back(g.edge(static_cast<EdgeId>(j)));
            const auto sub = compact(Hypergraph(2, g.num_vertices(), es));
            expect += sub.num_vertices() == 4 && oracle::isomorphic(sub, h);
        }
        EXPECT_EQ(enumerate_copies(g, h).size(), expect);
    }
}

TEST(Contains, Examples)
{
    const auto f3 = gen_Fr(3);
    const auto self = contains_copy(f3, f3);
    ASSERT_TRUE(self);
    EXPECT_EQ(self->edges.size(), 4u);
    EXPECT_FALSE(contains_copy(gen_clique(3, 4), f3));
    const auto k5 = gen_clique(3, 5);
    const auto w = contains_copy(k5, f3);
    ASSERT_TRUE(w);
    EXPECT_TRUE(is_valid_copy(k5, f3, *w));
}

TEST(Contains, MixedUniformityAndCaps)
{
    EXPECT_THROW(contains_copy(gen_clique(2, 4), gen_Fr(3)), Error);
    EmbedOptions opts;
    opts.caps.max_vertices = 3;
    EXPECT_THROW(contains_copy(gen_clique(3, 5), gen_Fr(3), opts), Error);
}

TEST(Contains, PinnedAndAllowed)
{
    const auto path = gen_loose_path(3, 2);   // {012, 234}
    const auto star = gen_star(3, 3);         // centre 0
    EmbedOptions o;
    o.pinned = {{2, 0}};                      // path's middle vertex onto the star centre
    EXPECT_TRUE(find_embedding(star, path, o));
    o.pinned = {{2, 1}};
    EXPECT_FALSE(find_embedding(star, path, o));
    EmbedOptions a;
    a.allowed.assign(7, 1);
    a.allowed[0] = 0;
    EXPECT_FALSE(find_embedding(star, path, a));
}

TEST(Packing, Examples)
{
    const auto k4 = gen_clique(2, 4);
    const auto k3 = gen_clique(2, 3);
    const auto pk = max_edge_disjoint_packing(k4, k3, 1);
    EXPECT_EQ(pk.copies.size(), 1u);
    EXPECT_TRUE(pk.maximal);
    const auto left = remove_edges(k4, pk.edge_set());
    EXPECT_EQ(left.num_edges(), 3u);
    EXPECT_FALSE(contains_copy(left, k3));

    const Hypergraph two(2, 6, {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}});
    EXPECT_EQ(max_edge_disjoint_packing(two, k3, 5).copies.size(), 2u);
}

TEST(Packing, MaximalOnRandomHostsAndRemovalKillsAllCopies)
{
    std::mt19937_64 rng(23);
    const auto h = gen_pair_overlap(3, 2);
    for (int i = 0; i < 50; ++i) {
        const auto g = oracle::random_hypergraph(12, 3, 0.2, rng);
        const auto pk = max_edge_disjoint_packing(g, h, static_cast<std::uint64_t>(i));
        EXPECT_TRUE(pk.maximal);
        std::set<EdgeId> used;
        for (const auto& c : pk.copies)
            for (EdgeId id : c.edges)
                EXPECT_TRUE(used.insert(id).second);
        for (const auto& c : enumerate_copies(g, h)) {
            bool hits = false;
            for (EdgeId id : c.edges)
                hits = hits || used.count(id);
            EXPECT_TRUE(hits);
        }
        EXPECT_FALSE(contains_copy(remove_edges(g, pk.edge_set()), h));
    }
}

TEST(Packing, SameSeedSameResult)
{
    std::mt19937_64 rng(24);
    const auto g = oracle::random_hypergraph(10, 3, 0.3, rng);
    const auto h = gen_pair_overlap(3, 2);
    EXPECT_EQ(max_edge_disjoint_packing(g, h, 77).edge_set(), max_edge_disjoint_packing(g, h, 77).edge_set());
}

TEST(Neighborhoods, Examples)
{
    EXPECT_TRUE(independent_neighborhoods_check(gen_star(3, 3)).independent);
    const auto f3 = gen_Fr(3);
    const auto rep = independent_neighborhoods_check(f3);
    EXPECT_FALSE(rep.independent);
    EXPECT_EQ(rep.core, (VertexSet{0, 1}));
    EXPECT_EQ(rep.transversal, (Edge{2, 3, 4}));
}

TEST(Neighborhoods, AgreesWithEmbeddingAndBruteForce)
{
    std::mt19937_64 rng(25);
    const auto f3 = gen_Fr(3);
    int with = 0;
    for (int i = 0; i < 100; ++i) {
        const auto g = oracle::random_hypergraph(12, 3, 0.1, rng);
        const bool free = independent_neighborhoods_check(g).independent;
        EXPECT_EQ(free, !contains_copy(g, f3).has_value());
        if (i < 20) {
            EXPECT_EQ(free, !oracle::contains_fan(g));
        }
        with += !free;
    }
    EXPECT_GT(with, 5);
}
