#pragma once

// Brute-force reference implementations. They share only the Hypergraph
// container with the library and are meant for tiny inputs.

#include "hfree/hypergraph.hpp"
#include "hfree/invariants.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using hfree::Edge;
using hfree::Hypergraph;
using hfree::Vertex;

inline std::vector<std::uint32_t> masks(const Hypergraph& g)
{
    std::vector<std::uint32_t> out;
    for (const Edge& e : g.edges()) {
        std::uint32_t m = 0;
        for (Vertex v : e)
            m |= 1u << v;
        out.push_back(m);
    }
    return out;
}

/// Largest subset containing no edge, over all 2^n subsets.
inline std::size_t alpha(const Hypergraph& g)
{
    const std::size_t n = g.num_vertices();
    const auto em = masks(g);
    std::size_t best = 0;
    for (std::uint32_t s = 0; s < (1u << n); ++s) {
        const auto size = static_cast<std::size_t>(__builtin_popcount(s));
        if (size <= best)
            continue;
        bool ok = true;
        for (auto m : em)
            if ((s & m) == m) {
                ok = false;
                break;
            }
        if (ok)
            best = size;
    }
    return best;
}

inline bool has_independent_set_of_size(const Hypergraph& g, std::size_t k)
{
    return alpha(g) >= k;
}

/// Whether some assignment of k colors leaves no edge monochromatic. Plain
/// depth-first enumeration in vertex order; an edge is checked once its
/// largest vertex is colored.
inline bool k_colorable(const Hypergraph& g, std::size_t k)
{
    const std::size_t n = g.num_vertices();
    if (n == 0)
        return true;
    if (k == 0)
        return false;
    std::vector<std::vector<const Edge*>> closing(n);
    for (const Edge& e : g.edges())
        closing[e.back()].push_back(&e);
    std::vector<std::size_t> c(n, 0);
    auto go = [&](auto&& self, std::size_t v) -> bool {
        if (v == n)
            return true;
        for (std::size_t col = 0; col < (v == 0 ? 1 : k); ++col) {
            c[v] = col;
            bool ok = true;
            for (const Edge* e : closing[v]) {
                bool mono = true;
                for (Vertex u : *e)
                    mono = mono && c[u] == col;
                if (mono) {
                    ok = false;
                    break;
                }
            }
            if (ok && self(self, v + 1))
                return true;
        }
        return false;
    };
    return go(go, 0);
}

inline std::size_t chi(const Hypergraph& g)
{
    std::size_t k = 0;
    while (!k_colorable(g, k))
        ++k;
    return k;
}

/// max (e'-1)/(v'-r) over all edge subsets with at least two edges.
inline hfree::Rational rho(const Hypergraph& h)
{
    const std::size_t m = h.num_edges();
    const auto r = static_cast<std::int64_t>(h.rank());
    hfree::Rational best(-1);
    for (std::uint32_t s = 0; s < (1u << m); ++s) {
        if (__builtin_popcount(s) < 2)
            continue;
        std::set<Vertex> span;
        for (std::size_t i = 0; i < m; ++i)
            if (s >> i & 1)
                span.insert(h.edge(static_cast<hfree::EdgeId>(i)).begin(), h.edge(static_cast<hfree::EdgeId>(i)).end());
        const hfree::Rational q(__builtin_popcount(s) - 1, static_cast<std::int64_t>(span.size()) - r);
        best = std::max(best, q);
    }
    return best;
}

inline std::set<Edge> permuted(const Hypergraph& g, const std::vector<Vertex>& perm)
{
    std::set<Edge> out;
    for (const Edge& e : g.edges()) {
        Edge m;
        for (Vertex v : e)
            m.push_back(perm[v]);
        std::sort(m.begin(), m.end());
        out.insert(m);
    }
    return out;
}

/// Per-edge count of vertex permutations preserving the edge set and
/// mapping the edge to itself, over all n! permutations.
inline std::vector<std::uint64_t> alpha_per_edge(const Hypergraph& h)
{
    const std::set<Edge> edges(h.edges().begin(), h.edges().end());
    std::vector<std::uint64_t> out(h.num_edges(), 0);
    std::vector<Vertex> perm(h.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (permuted(h, perm) != edges)
            continue;
        for (hfree::EdgeId id = 0; id < h.num_edges(); ++id) {
            Edge m;
            for (Vertex v : h.edge(id))
                m.push_back(perm[v]);
            std::sort(m.begin(), m.end());
            out[id] += m == h.edge(id);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

/// Isomorphism by trying every bijection.
inline bool isomorphic(const Hypergraph& a, const Hypergraph& b)
{
    if (a.rank() != b.rank() || a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges())
        return false;
    const std::set<Edge> target(b.edges().begin(), b.edges().end());
    std::vector<Vertex> perm(a.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    do {
        if (permuted(a, perm) == target)
            return true;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

/// Whether the host contains F_r, by testing every (r-1)-core, every r
/// tips and whether all r+1 required edges exist.
inline bool contains_fan(const Hypergraph& g)
{
    const std::size_t r = g.rank();
    const std::size_t n = g.num_vertices();
    if (n < 2 * r - 1)
        return false;
    // r-1 core vertices, then r tips among the rest
    std::vector<char> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(r - 1), 1);
    do {
        std::vector<Vertex> core, rest;
        for (Vertex v = 0; v < n; ++v)
            (pick[v] ? core : rest).push_back(v);
        std::vector<char> tip(rest.size(), 0);
        std::fill(tip.begin(), tip.begin() + static_cast<std::ptrdiff_t>(r), 1);
        do {
            Edge tips;
            for (std::size_t j = 0; j < rest.size(); ++j)
                if (tip[j])
                    tips.push_back(rest[j]);
            if (!g.contains_edge(tips))
                continue;
            bool all_in = true;
            for (Vertex x : tips) {
                Edge e = core;
                e.push_back(x);
                std::sort(e.begin(), e.end());
                all_in = all_in && g.contains_edge(e);
            }
            if (all_in)
                return true;
        } while (std::prev_permutation(tip.begin(), tip.end()));
    } while (std::prev_permutation(pick.begin(), pick.end()));
    return false;
}

/// Each potential r-edge on n vertices kept with probability p.
inline Hypergraph random_hypergraph(std::size_t n, std::size_t r, double p, std::mt19937_64& rng)
{
    std::bernoulli_distribution keep(p);
    std::vector<Edge> edges;
    std::vector<char> pick(n, 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(std::min(n, r)), 1);
    if (n >= r) {
        do {
            Edge e;
            for (Vertex v = 0; v < n; ++v)
                if (pick[v])
                    e.push_back(v);
            if (keep(rng))
                edges.push_back(e);
        } while (std::prev_permutation(pick.begin(), pick.end()));
    }
    return Hypergraph(r, n, std::move(edges));
}

inline Hypergraph random_relabel(const Hypergraph& g, std::mt19937_64& rng)
{
    std::vector<Vertex> perm(g.num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    return hfree::relabel(g, perm, g.num_vertices());
}

inline Hypergraph fano()
{
    return Hypergraph(3, 7, {{0, 1, 2}, {0, 3, 4}, {0, 5, 6}, {1, 3, 5}, {1, 4, 6}, {2, 3, 6}, {2, 4, 5}});
}

} // namespace oracle
