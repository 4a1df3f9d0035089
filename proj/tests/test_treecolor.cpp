#include "hfree/constructions.hpp"
#include "hfree/treecolor.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hfree;

namespace {

/// All 3-edges through vertex 0 on n vertices.
Hypergraph full_star(std::size_t n)
{
    std::vector<Edge> edges;
    for (Vertex a = 1; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            edges.push_back({0, a, b});
    return Hypergraph(3, n, std::move(edges));
}

Hypergraph disjoint_triangles(std::size_t count)
{
    std::vector<Edge> edges;
    for (Vertex i = 0; i < count; ++i) {
        const Vertex b = 3 * i;
        edges.push_back({b, b + 1});
        edges.push_back({b, b + 2});
        edges.push_back({b + 1, b + 2});
    }
    return Hypergraph(2, 3 * count, std::move(edges));
}

} // namespace

TEST(Trees, Recognition)
{
    EXPECT_TRUE(is_r_tree(gen_star(3, 3)));
    EXPECT_FALSE(is_r_forest(Hypergraph(3, 4, {{0, 1, 2}, {1, 2, 3}})));
    EXPECT_TRUE(is_r_tree(Hypergraph(3, 3, {{0, 1, 2}})));
    EXPECT_TRUE(is_r_forest(Hypergraph(3, 6, {{0, 1, 2}, {3, 4, 5}})));
    EXPECT_FALSE(is_r_tree(Hypergraph(3, 6, {{0, 1, 2}, {3, 4, 5}})));
    EXPECT_FALSE(is_r_tree(Hypergraph(3, 4, {{0, 1, 2}})));   // isolated vertex
    // Berge triangle through three distinct pairs
    EXPECT_FALSE(is_r_forest(Hypergraph(2, 3, {{0, 1}, {1, 2}, {0, 2}})));
    EXPECT_FALSE(is_r_forest(Hypergraph(3, 6, {{0, 1, 2}, {2, 3, 4}, {4, 5, 0}})));
}

TEST(Trees, RandomTreesSpanTheRightCount)
{
    std::mt19937_64 rng(41);
    for (int i = 0; i < 50; ++i) {
        const std::size_t r = 2 + i % 3;
        const std::size_t t = 1 + i % 5;
        // grow by attaching each new edge at a random existing vertex
        Hypergraph tree = Hypergraph(r, r, {[&] {
                                         Edge e(r);
                                         std::iota(e.begin(), e.end(), 0);
                                         return e;
                                     }()});
        for (std::size_t j = 1; j < t; ++j)
            tree = attach_leaf(tree, static_cast<Vertex>(rng() % tree.num_vertices()));
        EXPECT_TRUE(is_r_tree(tree));
        EXPECT_EQ(tree.num_vertices(), (r - 1) * t + 1);
        EXPECT_GE(leaves(tree).size(), t == 1 ? 1u : 2u);
    }
}

TEST(Trees, Leaves)
{
    const auto path = gen_loose_path(3, 3);
    EXPECT_EQ(leaves(path), (std::vector<EdgeId>{0, 2}));
    EXPECT_EQ(leaves(gen_star(3, 3)).size(), 3u);
    EXPECT_EQ(leaves(Hypergraph(3, 3, {{0, 1, 2}})).size(), 1u);
}

TEST(Trees, DeleteLeaf)
{
    const auto path = gen_loose_path(3, 3);   // {012, 234, 456}
    const auto less = delete_leaf(path, Edge{4, 5, 6});
    EXPECT_EQ(less, Hypergraph(3, 5, {{0, 1, 2}, {2, 3, 4}}));
    EXPECT_THROW(delete_leaf(path, Edge{2, 3, 4}), Error);
    EXPECT_EQ(delete_leaf(gen_star(3, 3), Edge{0, 5, 6}), Hypergraph(3, 5, {{0, 1, 2}, {0, 3, 4}}));
    const auto two = gen_loose_path(3, 2);
    EXPECT_EQ(delete_leaf(two, EdgeId{0}).num_edges(), 1u);
    EXPECT_EQ(delete_leaf(two, EdgeId{1}).num_edges(), 1u);
    try {
        delete_leaf(path, EdgeId{1});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::NotALeaf);
    }
}

TEST(Trees, LeafFamilies)
{
    for (const auto& t : {gen_loose_path(3, 3), gen_star(3, 3)}) {
        const auto fam = build_leaf_families(t);
        ASSERT_EQ(fam.families.size(), 3u);
        ASSERT_EQ(fam.families[1].size(), 1u);
        EXPECT_TRUE(are_isomorphic(fam.families[1][0].tree, gen_loose_path(3, 2)));
        ASSERT_EQ(fam.families[2].size(), 1u);
        EXPECT_EQ(fam.families[2][0].tree.num_edges(), 1u);
    }
    EXPECT_EQ(build_leaf_families(Hypergraph(3, 3, {{0, 1, 2}})).families.size(), 1u);
    EXPECT_THROW(build_leaf_families(Hypergraph(3, 4, {{0, 1, 2}, {1, 2, 3}})), Error);
}

TEST(Trees, LeafFamilyMembersHaveTheRightSize)
{
    // a caterpillar-like tree with several non-isomorphic deletions
    const Hypergraph t(2, 7, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {1, 5}, {5, 6}});
    const auto fam = build_leaf_families(t);
    for (std::size_t i = 0; i < fam.families.size(); ++i)
        for (const auto& m : fam.families[i]) {
            EXPECT_EQ(m.tree.num_edges(), t.num_edges() - i);
            EXPECT_TRUE(is_r_tree(m.tree));
            if (i > 0) {
                EXPECT_FALSE(m.parents.empty());
                for (auto [p, leaf] : m.parents)
                    EXPECT_TRUE(are_isomorphic(delete_leaf(fam.families[i - 1][p].tree, leaf), m.tree));
            }
        }
}

TEST(Connectors, Examples)
{
    const auto path_fam = build_leaf_families(gen_loose_path(3, 3));
    // F1 member is {012, 234}; relabelings may differ, so compare by role
    const auto& p2 = path_fam.families[1][0].tree;
    const auto c = connectors(path_fam, 1, 0);
    VertexSet expect;
    for (Vertex v = 0; v < p2.num_vertices(); ++v)
        if (p2.degree(v) == 1)
            expect.push_back(v);
    EXPECT_EQ(c, expect);
    EXPECT_EQ(c.size(), 4u);

    const auto star_fam = build_leaf_families(gen_star(3, 3));
    const auto& s2 = star_fam.families[1][0].tree;
    const auto cs = connectors(star_fam, 1, 0);
    ASSERT_EQ(cs.size(), 1u);
    EXPECT_EQ(s2.degree(cs[0]), 2u);

    EXPECT_EQ(connectors(path_fam, 2, 0).size(), 3u);
    EXPECT_THROW(connectors(path_fam, 0, 0), Error);
}

TEST(TreeColoring, FullStarHost)
{
    const auto g = full_star(9);
    const auto t = gen_loose_path(3, 3);
    const auto res = tree_free_coloring(g, t);
    ASSERT_FALSE(res.contains_tree);
    EXPECT_EQ(res.palette_bound, 9u);
    EXPECT_TRUE(is_proper(g, res.coloring));
    EXPECT_LE(res.coloring.palette_size, 9u);
    EXPECT_TRUE(res.checks.all());
}

TEST(TreeColoring, ContainsTreeReturnsWitness)
{
    const auto t = gen_loose_path(3, 3);
    const auto g = gen_loose_path(3, 5);
    const auto res = tree_free_coloring(g, t);
    ASSERT_TRUE(res.contains_tree);
    EXPECT_EQ(res.contains_tree->edges.size(), 3u);
}

TEST(TreeColoring, DisjointTriangles)
{
    const auto g = disjoint_triangles(4);
    const auto t = gen_loose_path(2, 3);
    const auto res = tree_free_coloring(g, t);
    ASSERT_FALSE(res.contains_tree);
    EXPECT_EQ(res.palette_bound, 5u);
    EXPECT_LE(res.coloring.palette_size, 5u);
    EXPECT_TRUE(res.checks.all());
}

TEST(TreeColoring, EmptyHost)
{
    const auto res = tree_free_coloring(Hypergraph::empty(3, 6), gen_loose_path(3, 2));
    EXPECT_EQ(res.coloring.palette_size, 1u);
    EXPECT_TRUE(res.checks.all());
}

TEST(TreeColoring, TraceInvariants)
{
    std::mt19937_64 rng(42);
    const auto t = gen_star(3, 2);
    int runs = 0;
    for (int i = 0; i < 20; ++i) {
        auto g = oracle::random_hypergraph(10, 3, 0.08, rng);
        const auto pk = max_edge_disjoint_packing(g, t, static_cast<std::uint64_t>(i));
        g = remove_edges(g, pk.edge_set());
        const auto res = tree_free_coloring(g, t);
        ASSERT_FALSE(res.contains_tree);
        EXPECT_TRUE(res.checks.all());
        const auto& tr = res.trace;
        std::set<Vertex> seen;
        for (std::size_t i1 = 0; i1 < tr.a_sets.size(); ++i1)
            for (Vertex v : tr.a_sets[i1]) {
                EXPECT_TRUE(seen.insert(v).second);
                EXPECT_EQ(tr.x_sets[v].size(), 2 * (t.num_edges() - (i1 + 1)));
            }
        for (const Edge& e : tr.hg.edges()) {
            const auto& xa = tr.x_sets[e[0]];
            const auto& xb = tr.x_sets[e[1]];
            EXPECT_TRUE(std::binary_search(xa.begin(), xa.end(), e[1]) || std::binary_search(xb.begin(), xb.end(), e[0]));
        }
        ++runs;
    }
    EXPECT_EQ(runs, 20);
}
