#pragma once

#include "hfree/hypergraph.hpp"
#include "hfree/invariants.hpp"
#include "hfree/random.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <vector>

namespace hfree {

/// A copy of a pattern in a host: the (unlabeled) set of host edges it
/// uses, plus one labeled embedding realising it.
struct Copy {
    /// Host edge ids, ascending.
    std::vector<EdgeId> edges;
    /// embedding[u] = host image of pattern vertex u (unset for isolated
    /// pattern vertices).
    std::vector<Vertex> embedding;

    friend bool operator==(const Copy& a, const Copy& b) { return a.edges == b.edges; }
};

inline constexpr Vertex unmapped = ~Vertex{0};

struct EmbedOptions {
    /// Host vertices the embedding may use; empty means all.
    std::vector<char> allowed;
    /// Pattern vertex -> host vertex constraints.
    std::vector<std::pair<Vertex, Vertex>> pinned;
    PatternCaps caps;
    std::uint64_t max_nodes = 200'000'000;
};

namespace detail {

/// Backtracking search for injective vertex maps taking every pattern edge
/// onto a host edge. Pattern vertices are placed connectivity-first so
/// candidates come from host edges around already placed images.
class Embedder {
public:
    Embedder(const Hypergraph& host, const Hypergraph& pattern, const EmbedOptions& opts)
        : g_(host), h_(pattern), opts_(opts)
    {
        if (g_.rank() != h_.rank())
            throw Error(Errc::MixedUniformity, "host and pattern differ in uniformity");
        if (h_.num_vertices() > opts_.caps.max_vertices || h_.num_edges() > opts_.caps.max_edges)
            throw Error(Errc::SizeCap, "pattern exceeds size cap");
        image_.assign(h_.num_vertices(), unmapped);
        used_.assign(g_.num_vertices(), 0);
        build_order();
    }

    /// Calls `visit(embedding)` for every embedding until it returns false.
    void run(const std::function<bool(const std::vector<Vertex>&)>& visit)
    {
        if (g_.num_vertices() < h_.num_vertices())
            return;
        for (auto [u, v] : opts_.pinned) {
            if (v >= g_.num_vertices() || !allowed(v))
                return;
            if (image_[u] != unmapped || used_[v])
                return;
            image_[u] = v;
            used_[v] = 1;
        }
        for (auto [u, v] : opts_.pinned)
            if (!edges_ok(u))
                return;
        visit_ = &visit;
        stop_ = false;
        extend(0);
    }

private:
    bool allowed(Vertex v) const { return opts_.allowed.empty() || opts_.allowed[v]; }

    void build_order()
    {
        const std::size_t n = h_.num_vertices();
        std::vector<char> placed(n, 0);
        for (auto [u, v] : opts_.pinned)
            placed[u] = 1;
        std::vector<std::size_t> touching(n, 0);
        auto mark = [&](Vertex u) {
            for (EdgeId id : h_.incident(u))
                for (Vertex w : h_.edge(id))
                    ++touching[w];
        };
        for (auto [u, v] : opts_.pinned)
            mark(u);
        for (;;) {
            std::optional<Vertex> pick;
            for (Vertex u = 0; u < n; ++u) {
                if (placed[u] || h_.degree(u) == 0)
                    continue;
                if (!pick || touching[u] > touching[*pick]
                    || (touching[u] == touching[*pick] && h_.degree(u) > h_.degree(*pick)))
                    pick = u;
            }
            if (!pick)
                break;
            placed[*pick] = 1;
            order_.push_back(*pick);
            mark(*pick);
        }
    }

    /// All fully placed pattern edges through u map onto host edges.
    bool edges_ok(Vertex u)
    {
        for (EdgeId id : h_.incident(u)) {
            const Edge& e = h_.edge(id);
            scratch_.clear();
            for (Vertex w : e) {
                if (image_[w] == unmapped)
                    break;
                scratch_.push_back(image_[w]);
            }
            if (scratch_.size() != e.size())
                continue;
            std::sort(scratch_.begin(), scratch_.end());
            if (!g_.contains_edge(scratch_))
                return false;
        }
        return true;
    }

    std::vector<Vertex> candidates(Vertex u)
    {
        // pattern edge through u with the most placed vertices
        const Edge* anchor = nullptr;
        std::size_t anchor_placed = 0;
        for (EdgeId id : h_.incident(u)) {
            const Edge& e = h_.edge(id);
            std::size_t k = 0;
            for (Vertex w : e)
                k += image_[w] != unmapped;
            if (k > anchor_placed) {
                anchor_placed = k;
                anchor = &e;
            }
        }
        std::vector<Vertex> out;
        if (!anchor) {
            for (Vertex v = 0; v < g_.num_vertices(); ++v)
                if (!used_[v] && allowed(v) && g_.degree(v) >= h_.degree(u))
                    out.push_back(v);
            return out;
        }
        std::vector<Vertex> placed_images;
        for (Vertex w : *anchor)
            if (image_[w] != unmapped)
                placed_images.push_back(image_[w]);
        std::sort(placed_images.begin(), placed_images.end());
        for (EdgeId id : g_.incident(placed_images[0])) {
            const Edge& f = g_.edge(id);
            if (!std::includes(f.begin(), f.end(), placed_images.begin(), placed_images.end()))
                continue;
            for (Vertex v : f)
                if (!used_[v] && allowed(v) && g_.degree(v) >= h_.degree(u))
                    out.push_back(v);
        }
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    void extend(std::size_t depth)
    {
        if (stop_)
            return;
        if (++nodes_ > opts_.max_nodes)
            throw Error(Errc::BudgetExceeded, "embedding search exceeded node budget");
        if (depth == order_.size()) {
            if (!(*visit_)(image_))
                stop_ = true;
            return;
        }
        const Vertex u = order_[depth];
        for (Vertex v : candidates(u)) {
            image_[u] = v;
            used_[v] = 1;
            if (edges_ok(u))
                extend(depth + 1);
            used_[v] = 0;
            image_[u] = unmapped;
            if (stop_)
                return;
        }
    }

    const Hypergraph& g_;
    const Hypergraph& h_;
    const EmbedOptions& opts_;
    std::vector<Vertex> order_;
    std::vector<Vertex> image_;
    std::vector<char> used_;
    Edge scratch_;
    std::uint64_t nodes_ = 0;
    bool stop_ = false;
    const std::function<bool(const std::vector<Vertex>&)>* visit_ = nullptr;
};

inline std::vector<EdgeId> image_edges(const Hypergraph& g, const Hypergraph& h, const std::vector<Vertex>& map)
{
    std::vector<EdgeId> out;
    Edge e2;
    for (const Edge& e : h.edges()) {
        e2.clear();
        for (Vertex u : e)
            e2.push_back(map[u]);
        std::sort(e2.begin(), e2.end());
        out.push_back(*g.find_edge(e2));
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace detail

/// First embedding found under the given constraints.
inline std::optional<std::vector<Vertex>> find_embedding(const Hypergraph& g, const Hypergraph& h,
                                                         const EmbedOptions& opts = {})
{
    std::optional<std::vector<Vertex>> found;
    detail::Embedder(g, h, opts).run([&](const std::vector<Vertex>& map) {
        found = map;
        return false;
    });
    return found;
}

/// Distinct copies of `h` in `g` (as edge subsets), ascending by edge ids.
/// With a limit the search stops after that many distinct copies.
inline std::vector<Copy> enumerate_copies(const Hypergraph& g, const Hypergraph& h,
                                          std::optional<std::size_t> limit = std::nullopt,
                                          const EmbedOptions& opts = {})
{
    std::map<std::vector<EdgeId>, std::vector<Vertex>> seen;
    if (limit && *limit == 0)
        return {};
    detail::Embedder(g, h, opts).run([&](const std::vector<Vertex>& map) {
        seen.try_emplace(detail::image_edges(g, h, map), map);
        return !(limit && seen.size() >= *limit);
    });
    std::vector<Copy> out;
    out.reserve(seen.size());
    for (auto& [edges, map] : seen)
        out.push_back(Copy{edges, map});
    return out;
}

inline std::optional<Copy> contains_copy(const Hypergraph& g, const Hypergraph& h, const EmbedOptions& opts = {})
{
    auto copies = enumerate_copies(g, h, 1, opts);
    if (copies.empty())
        return std::nullopt;
    return copies.front();
}

/// The copy's edges as a hypergraph on its spanned vertices.
inline Hypergraph copy_as_hypergraph(const Hypergraph& g, const Copy& c)
{
    VertexSet vs;
    for (EdgeId id : c.edges)
        vs.insert(vs.end(), g.edge(id).begin(), g.edge(id).end());
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    std::vector<Vertex> local(g.num_vertices(), 0);
    for (Vertex i = 0; i < vs.size(); ++i)
        local[vs[i]] = i;
    std::vector<Edge> edges;
    for (EdgeId id : c.edges) {
        Edge e;
        for (Vertex v : g.edge(id))
            e.push_back(local[v]);
        edges.push_back(std::move(e));
    }
    return Hypergraph(g.rank(), vs.size(), std::move(edges));
}

// ---------------------------------------------------------------------------
// Packing

struct Packing {
    std::vector<Copy> copies;
    /// Copies of the pattern present in the host when the packing was built.
    std::size_t host_copies = 0;
    /// Every copy in the host shares an edge with the packing.
    bool maximal = false;

    std::vector<EdgeId> edge_set() const
    {
        std::vector<EdgeId> out;
        for (const auto& c : copies)
            out.insert(out.end(), c.edges.begin(), c.edges.end());
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

/// Greedy edge-disjoint packing over all copies, visited in lexicographic
/// order shuffled by `order_seed`. Maximality is then certified against the
/// exhaustive copy list.
inline Packing max_edge_disjoint_packing(const Hypergraph& g, const Hypergraph& h, std::uint64_t order_seed,
                                         const EmbedOptions& opts = {})
{
    std::vector<Copy> all = enumerate_copies(g, h, std::nullopt, opts);
    std::vector<std::size_t> order(all.size());
    std::iota(order.begin(), order.end(), 0);
    Rng rng(order_seed);
    shuffle(std::span<std::size_t>(order), rng);

    Packing out;
    out.host_copies = all.size();
    std::vector<char> taken(g.num_edges(), 0);
    for (std::size_t idx : order) {
        const Copy& c = all[idx];
        if (std::any_of(c.edges.begin(), c.edges.end(), [&](EdgeId id) { return taken[id] != 0; }))
            continue;
        for (EdgeId id : c.edges)
            taken[id] = 1;
        out.copies.push_back(c);
    }
    out.maximal = std::all_of(all.begin(), all.end(), [&](const Copy& c) {
        return std::any_of(c.edges.begin(), c.edges.end(), [&](EdgeId id) { return taken[id] != 0; });
    });
    return out;
}

// ---------------------------------------------------------------------------
// Independent neighborhoods

struct NeighborhoodCheck {
    bool independent = true;
    /// Witness when not independent: an (r-1)-set and an edge inside N(core).
    VertexSet core;
    Edge transversal;
};

/// True iff no edge lies inside the neighborhood of any (r-1)-set, which is
/// the same as containing no copy of F_r. Returns the lexicographically
/// first (core, edge) witness otherwise.
inline NeighborhoodCheck independent_neighborhoods_check(const Hypergraph& g)
{
    std::map<VertexSet, VertexSet> nbhd;
    for (const Edge& e : g.edges())
        for (std::size_t skip = 0; skip < e.size(); ++skip) {
            VertexSet core;
            for (std::size_t j = 0; j < e.size(); ++j)
                if (j != skip)
                    core.push_back(e[j]);
            nbhd[core].push_back(e[skip]);
        }

    std::vector<char> in(g.num_vertices(), 0);
    for (auto& [core, nb] : nbhd) {
        if (nb.size() < g.rank())
            continue;
        std::sort(nb.begin(), nb.end());
        for (Vertex x : nb)
            in[x] = 1;
        for (Vertex x : nb) {
            for (EdgeId id : g.incident(x)) {
                const Edge& f = g.edge(id);
                if (f[0] != x)
                    continue;
                if (std::all_of(f.begin(), f.end(), [&](Vertex u) { return in[u] != 0; })) {
                    return NeighborhoodCheck{false, core, f};
                }
            }
        }
        for (Vertex x : nb)
            in[x] = 0;
    }
    return {};
}

} // namespace hfree
