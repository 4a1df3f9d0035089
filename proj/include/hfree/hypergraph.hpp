#pragma once

#include "hfree/error.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace hfree {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using Color = std::uint32_t;

/// Strictly ascending vertex ids.
using Edge = std::vector<Vertex>;
/// Sorted, duplicate-free vertex ids.
using VertexSet = std::vector<Vertex>;

/// An r-uniform hypergraph on vertices 0..n-1.
///
/// Immutable once built. The constructor sorts every edge, rejects
/// malformed input and stores the edge list in lexicographic order, so two
/// hypergraphs with the same edge set compare and serialize identically.
class Hypergraph {
public:
    Hypergraph() = default;

    Hypergraph(std::size_t r, std::size_t n, std::vector<Edge> edges)
        : r_(r), n_(n), edges_(std::move(edges))
    {
        if (r_ < 2)
            throw Error(Errc::InvalidArgument, "uniformity must be at least 2");
        for (auto& e : edges_) {
            if (e.size() != r_)
                throw Error(Errc::WrongArity, "edge has " + std::to_string(e.size()) + " vertices");
            std::sort(e.begin(), e.end());
            if (std::adjacent_find(e.begin(), e.end()) != e.end())
                throw Error(Errc::DuplicateVertexInEdge, "vertex repeated in edge");
            if (e.back() >= n_)
                throw Error(Errc::VertexOutOfRange, "vertex " + std::to_string(e.back()) + " >= n");
        }
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end())
            throw Error(Errc::DuplicateEdge, "edge listed twice");
        incidence_.assign(n_, {});
        for (EdgeId id = 0; id < edges_.size(); ++id)
            for (Vertex v : edges_[id])
                incidence_[v].push_back(id);
    }

    /// Edgeless hypergraph.
    static Hypergraph empty(std::size_t r, std::size_t n) { return Hypergraph(r, n, {}); }

    std::size_t rank() const noexcept { return r_; }
    std::size_t num_vertices() const noexcept { return n_; }
    std::size_t num_edges() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId id) const { return edges_[id]; }

    std::span<const EdgeId> incident(Vertex v) const { return incidence_[v]; }
    std::size_t degree(Vertex v) const { return incidence_[v].size(); }

    std::size_t max_degree() const
    {
        std::size_t best = 0;
        for (const auto& inc : incidence_)
            best = std::max(best, inc.size());
        return best;
    }

    /// Id of the edge with exactly these (ascending) vertices.
    std::optional<EdgeId> find_edge(std::span<const Vertex> sorted_vertices) const
    {
        auto less = [](const Edge& a, std::span<const Vertex> b) {
            return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
        };
        auto it = std::lower_bound(edges_.begin(), edges_.end(), sorted_vertices, less);
        if (it != edges_.end() && std::equal(it->begin(), it->end(), sorted_vertices.begin(), sorted_vertices.end()))
            return static_cast<EdgeId>(it - edges_.begin());
        return std::nullopt;
    }

    bool contains_edge(std::span<const Vertex> sorted_vertices) const
    {
        return find_edge(sorted_vertices).has_value();
    }

    /// Vertices lying in at least one edge.
    VertexSet support() const
    {
        VertexSet out;
        for (Vertex v = 0; v < n_; ++v)
            if (!incidence_[v].empty())
                out.push_back(v);
        return out;
    }

    friend bool operator==(const Hypergraph& a, const Hypergraph& b)
    {
        return a.r_ == b.r_ && a.n_ == b.n_ && a.edges_ == b.edges_;
    }

private:
    std::size_t r_ = 2;
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> incidence_;
};

/// Vertex -> color assignment. Validity is checked, never assumed.
struct Coloring {
    std::vector<Color> colors;
    std::size_t palette_size = 0;

    /// Number of distinct colors actually used.
    std::size_t used_colors() const
    {
        std::vector<Color> c = colors;
        std::sort(c.begin(), c.end());
        return static_cast<std::size_t>(std::unique(c.begin(), c.end()) - c.begin());
    }

    /// Color classes, indexed by color id.
    std::vector<VertexSet> classes() const
    {
        std::vector<VertexSet> out(palette_size);
        for (Vertex v = 0; v < colors.size(); ++v)
            out[colors[v]].push_back(v);
        return out;
    }

    friend bool operator==(const Coloring&, const Coloring&) = default;
};

/// First monochromatic edge in canonical order, if any.
inline std::optional<EdgeId> monochromatic_edge(const Hypergraph& g, const Coloring& c)
{
    for (EdgeId id = 0; id < g.num_edges(); ++id) {
        const Edge& e = g.edge(id);
        Color first = c.colors[e[0]];
        bool mono = std::all_of(e.begin() + 1, e.end(), [&](Vertex v) { return c.colors[v] == first; });
        if (mono)
            return id;
    }
    return std::nullopt;
}

/// Total assignment, colors inside the palette, no monochromatic edge.
inline bool is_proper(const Hypergraph& g, const Coloring& c)
{
    if (c.colors.size() != g.num_vertices())
        return false;
    for (Color col : c.colors)
        if (col >= c.palette_size)
            return false;
    return !monochromatic_edge(g, c).has_value();
}

/// No edge lies entirely inside `set`. `set` must be sorted.
inline bool is_independent(const Hypergraph& g, std::span<const Vertex> set)
{
    std::vector<char> in(g.num_vertices(), 0);
    for (Vertex v : set)
        in[v] = 1;
    for (Vertex v : set)
        for (EdgeId id : g.incident(v)) {
            const Edge& e = g.edge(id);
            if (e[0] == v && std::all_of(e.begin(), e.end(), [&](Vertex u) { return in[u] != 0; }))
                return false;
        }
    return true;
}

inline void check_vertex_set(const Hypergraph& g, std::span<const Vertex> s)
{
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] >= g.num_vertices())
            throw Error(Errc::VertexOutOfRange, "vertex " + std::to_string(s[i]) + " >= n");
        if (i > 0 && s[i - 1] >= s[i])
            throw Error(Errc::InvalidArgument, "vertex set must be sorted and duplicate-free");
    }
}

struct InducedSubhypergraph {
    Hypergraph graph;
    /// to_host[i] is the host vertex relabeled to i.
    std::vector<Vertex> to_host;
};

/// Edges of `g` fully inside `s`, relabeled densely in the order of `s`.
inline InducedSubhypergraph induced_subhypergraph(const Hypergraph& g, std::span<const Vertex> s)
{
    check_vertex_set(g, s);
    constexpr Vertex none = ~Vertex{0};
    std::vector<Vertex> local(g.num_vertices(), none);
    for (Vertex i = 0; i < s.size(); ++i)
        local[s[i]] = i;
    std::vector<Edge> edges;
    for (const Edge& e : g.edges()) {
        Edge mapped;
        mapped.reserve(e.size());
        for (Vertex v : e) {
            if (local[v] == none)
                break;
            mapped.push_back(local[v]);
        }
        if (mapped.size() == e.size())
            edges.push_back(std::move(mapped));
    }
    return {Hypergraph(g.rank(), s.size(), std::move(edges)), std::vector<Vertex>(s.begin(), s.end())};
}

/// N(S) = { v not in S : S + v is an edge }, for |S| = r - 1.
inline VertexSet neighborhood(const Hypergraph& g, std::span<const Vertex> s)
{
    if (s.size() + 1 != g.rank())
        throw Error(Errc::InvalidArgument, "neighborhood needs a set of size r-1");
    check_vertex_set(g, s);
    VertexSet out;
    // scan the edges through the first vertex of S
    for (EdgeId id : g.incident(s[0])) {
        const Edge& e = g.edge(id);
        if (!std::includes(e.begin(), e.end(), s.begin(), s.end()))
            continue;
        for (Vertex v : e)
            if (!std::binary_search(s.begin(), s.end(), v))
                out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Hypergraph with the listed edges removed (ids refer to `g`).
inline Hypergraph remove_edges(const Hypergraph& g, std::span<const EdgeId> ids)
{
    std::vector<char> drop(g.num_edges(), 0);
    for (EdgeId id : ids)
        drop[id] = 1;
    std::vector<Edge> kept;
    for (EdgeId id = 0; id < g.num_edges(); ++id)
        if (!drop[id])
            kept.push_back(g.edge(id));
    return Hypergraph(g.rank(), g.num_vertices(), std::move(kept));
}

/// Image of `g` under the vertex map `to` (injective into 0..n-1).
inline Hypergraph relabel(const Hypergraph& g, std::span<const Vertex> to, std::size_t n)
{
    std::vector<Edge> edges;
    edges.reserve(g.num_edges());
    for (const Edge& e : g.edges()) {
        Edge m;
        for (Vertex v : e)
            m.push_back(to[v]);
        edges.push_back(std::move(m));
    }
    return Hypergraph(g.rank(), n, std::move(edges));
}

/// Drops the vertices not covered by any edge, keeping the relative order.
inline Hypergraph compact(const Hypergraph& g)
{
    std::vector<Vertex> to(g.num_vertices(), ~Vertex{0});
    Vertex next = 0;
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        if (g.degree(v) > 0)
            to[v] = next++;
    return relabel(g, to, next);
}

// ---------------------------------------------------------------------------
// Text format
//
//   r n m
//   v1 v2 ... vr     (m lines)
//
// '#' lines are comments. Input edges may be unsorted; serialization is
// canonical (sorted vertices, lexicographically sorted edges, LF endings).

inline std::string serialize(const Hypergraph& g)
{
    std::string out = std::to_string(g.rank()) + ' ' + std::to_string(g.num_vertices()) + ' '
        + std::to_string(g.num_edges()) + '\n';
    for (const Edge& e : g.edges()) {
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i)
                out += ' ';
            out += std::to_string(e[i]);
        }
        out += '\n';
    }
    return out;
}

namespace detail {

inline bool parse_uints(std::string_view line, std::vector<std::uint64_t>& out)
{
    out.clear();
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
            ++i;
        if (i == line.size())
            break;
        if (line[i] < '0' || line[i] > '9')
            return false;
        std::uint64_t v = 0;
        while (i < line.size() && line[i] >= '0' && line[i] <= '9') {
            v = v * 10 + static_cast<std::uint64_t>(line[i] - '0');
            if (v > 0xffffffffULL)
                return false;
            ++i;
        }
        if (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r')
            return false;
        out.push_back(v);
    }
    return true;
}

inline bool blank(std::string_view line)
{
    return line.find_first_not_of(" \t\r") == std::string_view::npos;
}

} // namespace detail

inline Hypergraph parse_hypergraph(std::string_view text)
{
    std::vector<std::uint64_t> nums;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    bool have_header = false;
    std::size_t r = 0, n = 0, m = 0;
    std::vector<Edge> edges;
    std::vector<std::size_t> edge_lines;

    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos)
            end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++lineno;
        if (!line.empty() && line[0] == '#')
            continue;
        if (detail::blank(line))
            continue;
        if (!detail::parse_uints(line, nums)) {
            throw Error(have_header ? Errc::WrongArity : Errc::MalformedHeader, "expected unsigned integers",
                        lineno);
        }
        if (!have_header) {
            if (nums.size() != 3 || nums[0] < 2)
                throw Error(Errc::MalformedHeader, "expected 'r n m' with r >= 2", lineno);
            r = nums[0];
            n = nums[1];
            m = nums[2];
            have_header = true;
            continue;
        }
        if (nums.size() != r)
            throw Error(Errc::WrongArity, "expected " + std::to_string(r) + " vertices", lineno);
        Edge e(nums.begin(), nums.end());
        std::sort(e.begin(), e.end());
        if (std::adjacent_find(e.begin(), e.end()) != e.end())
            throw Error(Errc::DuplicateVertexInEdge, "", lineno);
        if (e.back() >= n)
            throw Error(Errc::VertexOutOfRange, "vertex " + std::to_string(e.back()) + " >= n", lineno);
        edges.push_back(std::move(e));
        edge_lines.push_back(lineno);
    }
    if (!have_header)
        throw Error(Errc::MalformedHeader, "missing header", lineno == 0 ? 1 : lineno);
    if (edges.size() != m)
        throw Error(Errc::EdgeCountMismatch,
                    "header declares " + std::to_string(m) + " edges, found " + std::to_string(edges.size()));

    std::vector<std::size_t> order(edges.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return edges[a] != edges[b] ? edges[a] < edges[b] : edge_lines[a] < edge_lines[b];
    });
    for (std::size_t i = 1; i < order.size(); ++i)
        if (edges[order[i]] == edges[order[i - 1]])
            throw Error(Errc::DuplicateEdge, "", edge_lines[order[i]]);

    return Hypergraph(r, n, std::move(edges));
}

inline Hypergraph read_hypergraph(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(Errc::Io, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_hypergraph(buf.str());
}

inline void write_text(const std::string& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::Io, "cannot write " + path);
    out << content;
    if (!out)
        throw Error(Errc::Io, "write failed for " + path);
}

} // namespace hfree
