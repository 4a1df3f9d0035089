#pragma once

#include "hfree/hypergraph.hpp"

#include <boost/rational.hpp>

#include <bit>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace hfree {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& q)
{
    return std::to_string(q.numerator()) + '/' + std::to_string(q.denominator());
}

inline double to_double(const Rational& q)
{
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

/// Patterns handed to the exhaustive routines in this header must stay
/// below these sizes.
struct PatternCaps {
    std::size_t max_vertices = 24;
    std::size_t max_edges = 24;
    std::uint64_t max_search_nodes = 5'000'000;
};

// ---------------------------------------------------------------------------
// Density

struct DensityReport {
    Rational rho;
    /// Edge ids of the maximising subhypergraph: fewest edges, then
    /// lexicographically smallest id list.
    std::vector<EdgeId> witness;
    /// (e - 1) / (v - r) of the whole hypergraph, v counting spanned vertices.
    Rational whole;
    bool balanced = false;
};

/// rho(H) = max over subhypergraphs H' with at least two edges of
/// (e' - 1) / (v' - r), where v' counts the vertices H' spans.
inline DensityReport compute_rho(const Hypergraph& h, const PatternCaps& caps = {})
{
    const std::size_t m = h.num_edges();
    if (m < 2)
        throw Error(Errc::NontrivialRequired, "density needs at least two edges");
    if (m > caps.max_edges || m > 30 || h.num_vertices() > 64)
        throw Error(Errc::SizeCap, "density sweep limited to " + std::to_string(caps.max_edges) + " edges");

    const auto r = static_cast<std::int64_t>(h.rank());
    std::vector<std::uint64_t> masks(m, 0);
    for (EdgeId id = 0; id < m; ++id)
        for (Vertex v : h.edge(id))
            masks[id] |= std::uint64_t{1} << v;

    // best = (e' - 1) / (v' - r) kept as an unreduced pair for exact comparison
    std::int64_t best_num = -1, best_den = 1;
    std::uint32_t best_set = 0;

    // depth-first over include/exclude decisions carrying the spanned mask
    auto visit = [&](auto&& self, std::size_t next, std::uint32_t set, std::uint64_t span) -> void {
        if (next == m) {
            const int e = std::popcount(set);
            if (e < 2)
                return;
            const std::int64_t num = e - 1;
            const std::int64_t den = std::popcount(span) - r;
            const std::int64_t lhs = num * best_den;
            const std::int64_t rhs = best_num * den;
            bool better = lhs > rhs;
            if (!better && lhs == rhs) {
                const int be = std::popcount(best_set);
                if (e != be) {
                    better = e < be;
                } else {
                    const std::uint32_t diff = set ^ best_set;
                    better = diff != 0 && (set & (diff & (~diff + 1))) != 0;
                }
            }
            if (better) {
                best_num = num;
                best_den = den;
                best_set = set;
            }
            return;
        }
        self(self, next + 1, set | (std::uint32_t{1} << next), span | masks[next]);
        self(self, next + 1, set, span);
    };
    visit(visit, 0, 0, 0);

    DensityReport out;
    out.rho = Rational(best_num, best_den);
    for (EdgeId id = 0; id < m; ++id)
        if (best_set >> id & 1)
            out.witness.push_back(id);
    const auto spanned = static_cast<std::int64_t>(h.support().size());
    out.whole = Rational(static_cast<std::int64_t>(m) - 1, spanned - r);
    out.balanced = out.whole == out.rho;
    return out;
}

// ---------------------------------------------------------------------------
// Colour refinement and canonical codes

namespace detail {

/// Equitable refinement of an ordered vertex colouring. Colours stay
/// 0..k-1 and new cells are ordered by (old colour, signature), so the
/// result is isomorphism-invariant.
inline std::vector<std::uint32_t> refine(const Hypergraph& h, std::vector<std::uint32_t> colors)
{
    const std::size_t n = h.num_vertices();
    std::size_t cells = n == 0 ? 0 : *std::max_element(colors.begin(), colors.end()) + 1;
    for (;;) {
        std::vector<std::vector<std::uint32_t>> sig(n);
        for (Vertex v = 0; v < n; ++v) {
            std::vector<std::vector<std::uint32_t>> per_edge;
            for (EdgeId id : h.incident(v)) {
                std::vector<std::uint32_t> others;
                for (Vertex u : h.edge(id))
                    if (u != v)
                        others.push_back(colors[u]);
                std::sort(others.begin(), others.end());
                per_edge.push_back(std::move(others));
            }
            std::sort(per_edge.begin(), per_edge.end());
            auto& s = sig[v];
            s.push_back(colors[v]);
            s.push_back(static_cast<std::uint32_t>(per_edge.size()));
            for (const auto& pe : per_edge)
                s.insert(s.end(), pe.begin(), pe.end());
        }
        std::vector<std::vector<std::uint32_t>> distinct = sig;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        for (Vertex v = 0; v < n; ++v)
            colors[v] = static_cast<std::uint32_t>(
                std::lower_bound(distinct.begin(), distinct.end(), sig[v]) - distinct.begin());
        if (distinct.size() == cells)
            return colors;
        cells = distinct.size();
    }
}

inline std::vector<std::uint32_t> individualize(std::vector<std::uint32_t> colors, Vertex v)
{
    const std::uint32_t c = colors[v];
    for (auto& col : colors)
        if (col >= c)
            ++col;
    colors[v] = c;
    return colors;
}

inline bool discrete(const std::vector<std::uint32_t>& colors)
{
    return colors.empty() || *std::max_element(colors.begin(), colors.end()) + 1 == colors.size();
}

/// Sorted edge list of `h` relabeled by `label`, flattened.
inline std::vector<Vertex> relabeled_code(const Hypergraph& h, const std::vector<std::uint32_t>& label)
{
    std::vector<Edge> edges;
    edges.reserve(h.num_edges());
    for (const Edge& e : h.edges()) {
        Edge m;
        for (Vertex v : e)
            m.push_back(label[v]);
        std::sort(m.begin(), m.end());
        edges.push_back(std::move(m));
    }
    std::sort(edges.begin(), edges.end());
    std::vector<Vertex> flat;
    for (const auto& e : edges)
        flat.insert(flat.end(), e.begin(), e.end());
    return flat;
}

} // namespace detail

struct CanonicalForm {
    std::string code;
    /// label[v] = canonical id of vertex v.
    std::vector<Vertex> label;
};

/// Canonical relabeling by individualisation-refinement: the smallest
/// sorted edge list among all leaves of the search tree. Leaves cover every
/// relabeling compatible with the refined partition, so two hypergraphs get
/// the same code exactly when they are isomorphic.
inline CanonicalForm canonical_form(const Hypergraph& h, const PatternCaps& caps = {})
{
    if (h.num_vertices() > caps.max_vertices)
        throw Error(Errc::SizeCap, "pattern has " + std::to_string(h.num_vertices()) + " vertices, cap is "
                                       + std::to_string(caps.max_vertices));
    std::vector<std::uint32_t> start(h.num_vertices(), 0);
    std::optional<std::vector<Vertex>> best_code;
    std::vector<std::uint32_t> best_label;
    std::uint64_t nodes = 0;

    auto search = [&](auto&& self, std::vector<std::uint32_t> colors) -> void {
        if (++nodes > caps.max_search_nodes)
            throw Error(Errc::SizeCap, "canonical labeling search exceeded node cap");
        colors = detail::refine(h, std::move(colors));
        if (detail::discrete(colors)) {
            auto code = detail::relabeled_code(h, colors);
            if (!best_code || code < *best_code) {
                best_code = std::move(code);
                best_label = colors;
            }
            return;
        }
        // first non-singleton cell
        std::vector<std::size_t> count(colors.size(), 0);
        for (auto c : colors)
            ++count[c];
        std::uint32_t target = 0;
        while (count[target] < 2)
            ++target;
        for (Vertex v = 0; v < colors.size(); ++v)
            if (colors[v] == target)
                self(self, detail::individualize(colors, v));
    };
    search(search, start);

    CanonicalForm out;
    out.label.assign(best_label.begin(), best_label.end());
    out.code = std::to_string(h.rank()) + ' ' + std::to_string(h.num_vertices()) + ' '
        + std::to_string(h.num_edges()) + ':';
    for (std::size_t i = 0; i < best_code->size(); ++i) {
        if (i)
            out.code += (i % h.rank() == 0) ? ';' : ',';
        out.code += std::to_string((*best_code)[i]);
    }
    return out;
}

inline std::string canonical_code(const Hypergraph& h, const PatternCaps& caps = {})
{
    return canonical_form(h, caps).code;
}

inline bool are_isomorphic(const Hypergraph& a, const Hypergraph& b, const PatternCaps& caps = {})
{
    if (a.rank() != b.rank() || a.num_vertices() != b.num_vertices() || a.num_edges() != b.num_edges())
        return false;
    auto degrees = [](const Hypergraph& h) {
        std::vector<std::size_t> d;
        for (Vertex v = 0; v < h.num_vertices(); ++v)
            d.push_back(h.degree(v));
        std::sort(d.begin(), d.end());
        return d;
    };
    if (degrees(a) != degrees(b))
        return false;
    return canonical_code(a, caps) == canonical_code(b, caps);
}

// ---------------------------------------------------------------------------
// Automorphisms

struct AutReport {
    /// alpha_per_edge[e] = number of automorphisms mapping edge e onto itself.
    std::vector<std::uint64_t> alpha_per_edge;
    std::uint64_t alpha_min = 0;
    std::uint64_t aut_order = 0;
    /// Edge orbit representative (smallest edge id of the orbit).
    std::vector<EdgeId> edge_orbit;
};

/// Exhaustive automorphism enumeration. Candidates for each vertex are
/// limited to its refined colour class; isolated vertices contribute a
/// factorial factor without being enumerated.
inline AutReport edge_automorphisms(const Hypergraph& h, const PatternCaps& caps = {})
{
    if (h.num_edges() == 0)
        throw Error(Errc::InvalidArgument, "automorphism report needs a nonempty hypergraph");
    if (h.num_vertices() > caps.max_vertices)
        throw Error(Errc::SizeCap, "pattern too large for automorphism enumeration");

    const std::size_t n = h.num_vertices();
    const std::size_t m = h.num_edges();
    const auto colors = detail::refine(h, std::vector<std::uint32_t>(n, 0));
    const VertexSet support = h.support();

    // connectivity-first order over the support
    std::vector<Vertex> order;
    std::vector<char> queued(n, 0);
    for (Vertex root : support) {
        if (queued[root])
            continue;
        std::vector<Vertex> frontier{root};
        queued[root] = 1;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            Vertex v = frontier[i];
            order.push_back(v);
            for (EdgeId id : h.incident(v))
                for (Vertex u : h.edge(id))
                    if (!queued[u]) {
                        queued[u] = 1;
                        frontier.push_back(u);
                    }
        }
    }

    constexpr Vertex unset = ~Vertex{0};
    std::vector<Vertex> image(n, unset);
    std::vector<char> used(n, 0);
    std::vector<std::uint64_t> fixes(m, 0);
    std::vector<EdgeId> parent(m);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](EdgeId x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    std::uint64_t count = 0;
    std::uint64_t nodes = 0;
    Edge scratch;

    auto edge_image = [&](EdgeId id) -> std::optional<EdgeId> {
        scratch.clear();
        for (Vertex v : h.edge(id))
            scratch.push_back(image[v]);
        std::sort(scratch.begin(), scratch.end());
        return h.find_edge(scratch);
    };

    auto extend = [&](auto&& self, std::size_t depth) -> void {
        if (++nodes > caps.max_search_nodes)
            throw Error(Errc::SizeCap, "automorphism search exceeded node cap");
        if (depth == order.size()) {
            ++count;
            for (EdgeId id = 0; id < m; ++id) {
                EdgeId img = *edge_image(id);
                if (img == id)
                    ++fixes[id];
                EdgeId a = find(id), b = find(img);
                if (a != b)
                    parent[std::max(a, b)] = std::min(a, b);
            }
            return;
        }
        const Vertex v = order[depth];
        for (Vertex w : support) {
            if (used[w] || colors[w] != colors[v])
                continue;
            image[v] = w;
            used[w] = 1;
            bool ok = true;
            for (EdgeId id : h.incident(v)) {
                const Edge& e = h.edge(id);
                if (std::any_of(e.begin(), e.end(), [&](Vertex u) { return image[u] == unset; }))
                    continue;
                if (!edge_image(id)) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                self(self, depth + 1);
            used[w] = 0;
            image[v] = unset;
        }
    };
    extend(extend, 0);

    std::uint64_t iso_factor = 1;
    for (std::uint64_t k = 2; k <= n - support.size(); ++k)
        iso_factor *= k;

    AutReport out;
    out.aut_order = count * iso_factor;
    out.alpha_per_edge.resize(m);
    for (EdgeId id = 0; id < m; ++id)
        out.alpha_per_edge[id] = fixes[id] * iso_factor;
    out.alpha_min = *std::min_element(out.alpha_per_edge.begin(), out.alpha_per_edge.end());
    out.edge_orbit.resize(m);
    for (EdgeId id = 0; id < m; ++id)
        out.edge_orbit[id] = find(id);
    return out;
}

// ---------------------------------------------------------------------------
// Families

struct MemberProfile {
    std::size_t vertices = 0;   // spanned vertices
    std::size_t edges = 0;
    Rational rho;
    std::uint64_t alpha = 0;    // alpha_min
    bool balanced = false;
};

struct FamilyProfile {
    std::size_t r = 0;
    /// order[j] = index of the member with the j-th smallest density.
    std::vector<std::size_t> order;
    Rational rho;
    /// Number of members attaining the minimum density.
    std::size_t s = 0;
    /// Indexed like the input family.
    std::vector<MemberProfile> members;
    bool all_balanced = false;
    /// rho > 1/(r-1)
    bool dense_enough = false;
};

inline FamilyProfile family_profile(std::span<const Hypergraph> family, const PatternCaps& caps = {})
{
    if (family.empty())
        throw Error(Errc::EmptyFamily, "family has no members");
    FamilyProfile out;
    out.r = family[0].rank();
    for (const auto& h : family)
        if (h.rank() != out.r)
            throw Error(Errc::MixedUniformity, "family members differ in uniformity");

    out.all_balanced = true;
    for (const auto& h : family) {
        const DensityReport d = compute_rho(h, caps);
        MemberProfile mp;
        mp.vertices = h.support().size();
        mp.edges = h.num_edges();
        mp.rho = d.rho;
        mp.balanced = d.balanced;
        mp.alpha = edge_automorphisms(h, caps).alpha_min;
        out.all_balanced = out.all_balanced && mp.balanced;
        out.members.push_back(mp);
    }
    out.order.resize(family.size());
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(),
                     [&](std::size_t a, std::size_t b) { return out.members[a].rho < out.members[b].rho; });
    out.rho = out.members[out.order[0]].rho;
    out.s = static_cast<std::size_t>(std::count_if(out.members.begin(), out.members.end(),
                                                   [&](const MemberProfile& mp) { return mp.rho == out.rho; }));
    out.dense_enough = out.rho > Rational(1, static_cast<std::int64_t>(out.r) - 1);
    return out;
}

} // namespace hfree
