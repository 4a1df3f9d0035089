#pragma once

#include "hfree/embeddings.hpp"
#include "hfree/hypergraph.hpp"
#include "hfree/invariants.hpp"
#include "hfree/solvers.hpp"

#include <array>
#include <cassert>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hfree {

namespace detail {

struct UnionFind {
    std::vector<std::size_t> parent;

    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x)
    {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }

    /// False if x and y were already joined.
    bool unite(std::size_t x, std::size_t y)
    {
        x = find(x);
        y = find(y);
        if (x == y)
            return false;
        parent[x] = y;
        return true;
    }
};

} // namespace detail

/// No Berge cycle, i.e. the vertex-edge incidence graph is acyclic.
inline bool is_r_forest(const Hypergraph& g)
{
    const std::size_t n = g.num_vertices();
    detail::UnionFind uf(n + g.num_edges());
    for (EdgeId id = 0; id < g.num_edges(); ++id)
        for (Vertex v : g.edge(id))
            if (!uf.unite(v, n + id))
                return false;
    return true;
}

/// Connected r-forest with at least one edge and no isolated vertex.
inline bool is_r_tree(const Hypergraph& g)
{
    if (g.num_edges() == 0 || !is_r_forest(g))
        return false;
    const std::size_t n = g.num_vertices();
    detail::UnionFind uf(n);
    for (const Edge& e : g.edges())
        for (Vertex v : e)
            uf.unite(e[0], v);
    for (Vertex v = 0; v < n; ++v)
        if (uf.find(v) != uf.find(0))
            return false;
    // an acyclic connected incidence graph has n + m - 1 = r m edges
    assert(n == (g.rank() - 1) * g.num_edges() + 1);
    return true;
}

/// Edges with at most one vertex of degree greater than one.
inline std::vector<EdgeId> leaves(const Hypergraph& t)
{
    std::vector<EdgeId> out;
    for (EdgeId id = 0; id < t.num_edges(); ++id) {
        std::size_t shared = 0;
        for (Vertex v : t.edge(id))
            shared += t.degree(v) > 1;
        if (shared <= 1)
            out.push_back(id);
    }
    return out;
}

/// Removes leaf `leaf` and its degree-one vertices.
inline Hypergraph delete_leaf(const Hypergraph& t, EdgeId leaf)
{
    if (leaf >= t.num_edges())
        throw Error(Errc::InvalidArgument, "edge id out of range");
    const auto ls = leaves(t);
    if (std::find(ls.begin(), ls.end(), leaf) == ls.end())
        throw Error(Errc::NotALeaf, "edge " + std::to_string(leaf) + " is not a leaf");
    if (t.num_edges() < 2)
        throw Error(Errc::InvalidArgument, "cannot delete the only edge of a tree");
    const std::array<EdgeId, 1> ids{leaf};
    return compact(remove_edges(t, ids));
}

inline Hypergraph delete_leaf(const Hypergraph& t, std::span<const Vertex> leaf)
{
    const auto id = t.find_edge(leaf);
    if (!id)
        throw Error(Errc::NotALeaf, "edge not present");
    return delete_leaf(t, *id);
}

struct LeafFamilyMember {
    Hypergraph tree;
    std::string code;
    /// (index in the previous family, deleted leaf id there) for every
    /// deletion producing this member.
    std::vector<std::pair<std::size_t, EdgeId>> parents;
};

struct LeafFamilies {
    /// families[i] holds the trees with t - i edges.
    std::vector<std::vector<LeafFamilyMember>> families;
};

inline LeafFamilies build_leaf_families(const Hypergraph& t, const PatternCaps& caps = {})
{
    if (!is_r_tree(t))
        throw Error(Errc::InvalidArgument, "pattern is not an r-tree");
    LeafFamilies out;
    out.families.push_back({LeafFamilyMember{t, canonical_code(t, caps), {}}});
    for (std::size_t i = 1; i < t.num_edges(); ++i) {
        std::vector<LeafFamilyMember> next;
        const auto& prev = out.families.back();
        for (std::size_t p = 0; p < prev.size(); ++p) {
            for (EdgeId leaf : leaves(prev[p].tree)) {
                Hypergraph child = delete_leaf(prev[p].tree, leaf);
                std::string code = canonical_code(child, caps);
                auto it = std::find_if(next.begin(), next.end(), [&](const auto& m) { return m.code == code; });
                if (it == next.end())
                    next.push_back(LeafFamilyMember{std::move(child), std::move(code), {{p, leaf}}});
                else
                    it->parents.emplace_back(p, leaf);
            }
        }
        out.families.push_back(std::move(next));
    }
    return out;
}

/// `tree` with a fresh edge {v, new vertices} attached.
inline Hypergraph attach_leaf(const Hypergraph& tree, Vertex v)
{
    const std::size_t n = tree.num_vertices();
    const std::size_t r = tree.rank();
    std::vector<Edge> edges(tree.edges().begin(), tree.edges().end());
    Edge e{v};
    for (std::size_t j = 0; j + 1 < r; ++j)
        e.push_back(static_cast<Vertex>(n + j));
    edges.push_back(std::move(e));
    return Hypergraph(r, n + r - 1, std::move(edges));
}

/// Vertices of families[i][member] at which attaching a fresh leaf gives a
/// tree isomorphic to a member of families[i-1].
inline VertexSet connectors(const LeafFamilies& fam, std::size_t i, std::size_t member,
                            const PatternCaps& caps = {})
{
    if (i == 0 || i >= fam.families.size() || member >= fam.families[i].size())
        throw Error(Errc::InvalidArgument, "no such leaf-family member");
    std::set<std::string> above;
    for (const auto& m : fam.families[i - 1])
        above.insert(m.code);
    const Hypergraph& tree = fam.families[i][member].tree;
    VertexSet out;
    for (Vertex v = 0; v < tree.num_vertices(); ++v)
        if (above.count(canonical_code(attach_leaf(tree, v), caps)))
            out.push_back(v);
    return out;
}

struct TreeColoringTrace {
    /// a_sets[i-1] = A_i, ascending.
    std::vector<VertexSet> a_sets;
    /// x_sets[v] = X_v (empty for the residue).
    std::vector<VertexSet> x_sets;
    /// Round in which v was removed, 0 for the residue.
    std::vector<std::size_t> round;
    /// (member index in F_i, connector vertex of that member) behind X_v.
    std::vector<std::pair<std::size_t, Vertex>> witness;
    VertexSet residue;
    Hypergraph hg;
    std::vector<Vertex> elimination_order;
    std::size_t degeneracy = 0;
    Coloring coloring;
};

struct TreeColoringChecks {
    bool residue_spans_no_edge = false;
    bool degeneracy_within_bound = false;
    bool palette_within_bound = false;
    bool proper_for_hg = false;
    bool proper_for_g = false;
    bool witnesses_verified = false;

    bool all() const
    {
        return residue_spans_no_edge && degeneracy_within_bound && palette_within_bound && proper_for_hg
            && proper_for_g && witnesses_verified;
    }
};

struct TreeColoringResult {
    /// Set instead of a coloring when the host contains the tree.
    std::optional<Copy> contains_tree;
    Coloring coloring;
    TreeColoringTrace trace;
    /// 2(r-1)(t-1) + 1
    std::size_t palette_bound = 0;
    TreeColoringChecks checks;
};

/// Colors a T-free host with at most 2(r-1)(t-1)+1 colors. Round i removes
/// A_i, the vertices that are a connector image of a copy of some member of
/// F_i inside the remaining host, and remembers one such copy per vertex as
/// X_v. Joining each v to X_v gives a graph of small degeneracy whose proper
/// colorings are proper for the host.
inline TreeColoringResult tree_free_coloring(const Hypergraph& g, const Hypergraph& t, const EmbedOptions& base = {})
{
    if (g.rank() != t.rank())
        throw Error(Errc::MixedUniformity, "host and tree differ in uniformity");
    const std::size_t r = g.rank();
    const std::size_t n = g.num_vertices();
    const std::size_t te = t.num_edges();
    TreeColoringResult out;
    out.palette_bound = 2 * (r - 1) * (te - 1) + 1;

    const LeafFamilies fam = build_leaf_families(t, base.caps);
    {
        EmbedOptions o = base;
        o.allowed.clear();
        o.pinned.clear();
        if (auto c = contains_copy(g, t, o)) {
            out.contains_tree = std::move(c);
            return out;
        }
    }

    auto& tr = out.trace;
    tr.x_sets.assign(n, {});
    tr.round.assign(n, 0);
    tr.witness.assign(n, {0, 0});
    std::vector<char> alive(n, 1);
    std::vector<std::vector<VertexSet>> member_connectors(fam.families.size());
    for (std::size_t i = 1; i < fam.families.size(); ++i)
        for (std::size_t m = 0; m < fam.families[i].size(); ++m)
            member_connectors[i].push_back(connectors(fam, i, m, base.caps));

    for (std::size_t i = 1; i < te; ++i) {
        VertexSet a;
        EmbedOptions o = base;
        o.allowed = alive;
        for (Vertex v = 0; v < n; ++v) {
            if (!alive[v] || g.degree(v) == 0)
                continue;
            bool found = false;
            for (std::size_t m = 0; m < fam.families[i].size() && !found; ++m) {
                const Hypergraph& tree = fam.families[i][m].tree;
                for (Vertex c : member_connectors[i][m]) {
                    o.pinned = {{c, v}};
                    auto emb = find_embedding(g, tree, o);
                    if (!emb)
                        continue;
                    VertexSet x;
                    for (Vertex u = 0; u < tree.num_vertices(); ++u)
                        if (u != c)
                            x.push_back((*emb)[u]);
                    std::sort(x.begin(), x.end());
                    tr.x_sets[v] = std::move(x);
                    tr.witness[v] = {m, c};
                    found = true;
                    break;
                }
            }
            if (found)
                a.push_back(v);
        }
        for (Vertex v : a) {
            alive[v] = 0;
            tr.round[v] = i;
        }
        tr.a_sets.push_back(std::move(a));
    }
    for (Vertex v = 0; v < n; ++v)
        if (alive[v])
            tr.residue.push_back(v);

    std::set<Edge> hg_edges;
    for (Vertex v = 0; v < n; ++v)
        for (Vertex u : tr.x_sets[v])
            hg_edges.insert(Edge{std::min(u, v), std::max(u, v)});
    tr.hg = Hypergraph(2, n, std::vector<Edge>(hg_edges.begin(), hg_edges.end()));
    auto dc = degeneracy_coloring(tr.hg);
    tr.elimination_order = std::move(dc.elimination_order);
    tr.degeneracy = dc.degeneracy;
    tr.coloring = dc.coloring;
    out.coloring = std::move(dc.coloring);

    auto& ck = out.checks;
    ck.residue_spans_no_edge = is_independent(g, tr.residue);
    ck.degeneracy_within_bound = tr.degeneracy <= 2 * (r - 1) * (te - 1);
    ck.palette_within_bound = out.coloring.palette_size <= out.palette_bound;
    ck.proper_for_hg = is_proper(tr.hg, out.coloring);
    ck.proper_for_g = is_proper(g, out.coloring);
    ck.witnesses_verified = true;
    for (Vertex v = 0; v < n && ck.witnesses_verified; ++v) {
        const std::size_t i = tr.round[v];
        if (i == 0)
            continue;
        const auto [m, c] = tr.witness[v];
        const Hypergraph& tree = fam.families[i][m].tree;
        EmbedOptions o = base;
        o.allowed.assign(n, 0);
        o.allowed[v] = 1;
        for (Vertex u : tr.x_sets[v])
            o.allowed[u] = 1;
        o.pinned = {{c, v}};
        ck.witnesses_verified = tr.x_sets[v].size() == (r - 1) * (te - i) && find_embedding(g, tree, o).has_value();
    }
    return out;
}

} // namespace hfree
