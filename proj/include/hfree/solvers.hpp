#pragma once

#include "hfree/embeddings.hpp"
#include "hfree/hypergraph.hpp"
#include "hfree/invariants.hpp"
#include "hfree/random.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <set>
#include <string>
#include <vector>

namespace hfree {

/// Caps for the search routines. Hitting one yields an explicitly flagged
/// outcome, never a silently wrong answer.
struct SolverBudget {
    std::uint64_t max_nodes = 200'000'000;
    /// Zero disables the wall-clock cap.
    std::chrono::milliseconds max_time{0};
    std::uint64_t max_resamples = 10'000'000;
};

/// Largest host the bitset solvers accept.
inline constexpr std::size_t exact_vertex_cap = 64;

struct IndependentSet {
    VertexSet vertices;
    bool certified_maximum = false;
};

namespace detail {

class Deadline {
public:
    explicit Deadline(const SolverBudget& b)
        : budget_(b), start_(std::chrono::steady_clock::now())
    {
    }

    /// Counts one node; true when a cap is hit.
    bool tick()
    {
        ++nodes_;
        if (nodes_ > budget_.max_nodes)
            return true;
        if (budget_.max_time.count() > 0 && (nodes_ & 1023) == 0)
            return std::chrono::steady_clock::now() - start_ > budget_.max_time;
        return false;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    SolverBudget budget_;
    std::chrono::steady_clock::time_point start_;
    std::uint64_t nodes_ = 0;
};

using boost::multiprecision::cpp_int;

inline cpp_int ipow(std::uint64_t base, std::uint64_t exp)
{
    cpp_int out = 1;
    for (std::uint64_t i = 0; i < exp; ++i)
        out *= base;
    return out;
}

inline std::vector<std::uint64_t> edge_masks(const Hypergraph& g)
{
    std::vector<std::uint64_t> masks;
    masks.reserve(g.num_edges());
    for (const Edge& e : g.edges()) {
        std::uint64_t m = 0;
        for (Vertex v : e)
            m |= std::uint64_t{1} << v;
        masks.push_back(m);
    }
    return masks;
}

inline VertexSet mask_to_set(std::uint64_t mask)
{
    VertexSet out;
    while (mask) {
        out.push_back(static_cast<Vertex>(std::countr_zero(mask)));
        mask &= mask - 1;
    }
    return out;
}

} // namespace detail

/// size^den >= m^num, i.e. size >= m^(num/den) without rounding.
inline bool meets_power(std::size_t size, std::size_t m, const Rational& alpha)
{
    const auto num = static_cast<std::uint64_t>(alpha.numerator());
    const auto den = static_cast<std::uint64_t>(alpha.denominator());
    return detail::ipow(size, den) >= detail::ipow(m, num);
}

/// Greedy independent set: vertices by ascending degree, skipping any that
/// would complete an edge.
inline VertexSet greedy_independent_set(const Hypergraph& g)
{
    std::vector<Vertex> order(g.num_vertices());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) < g.degree(b); });
    std::vector<char> in(g.num_vertices(), 0);
    for (Vertex v : order) {
        bool blocked = false;
        for (EdgeId id : g.incident(v)) {
            const Edge& e = g.edge(id);
            if (std::all_of(e.begin(), e.end(), [&](Vertex u) { return u == v || in[u]; })) {
                blocked = true;
                break;
            }
        }
        if (!blocked)
            in[v] = 1;
    }
    VertexSet out;
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        if (in[v])
            out.push_back(v);
    return out;
}

// ---------------------------------------------------------------------------
// Independence number

struct IndependenceResult {
    std::size_t alpha = 0;
    IndependentSet witness;
    /// Proven upper bound; equals alpha when exact.
    std::size_t upper_bound = 0;
    bool exact = false;
    std::uint64_t nodes = 0;
};

/// Maximum strong independent set by branch and bound over vertex bitsets.
///
/// Lower bound from the greedy set; upper bound |S| + |U| minus the size of
/// a greedy family of live edges whose undecided parts are pairwise
/// disjoint (each needs its own excluded vertex). Including a vertex forces
/// out the last undecided vertex of any edge it would otherwise complete.
inline IndependenceResult independence_number(const Hypergraph& g, const SolverBudget& budget = {})
{
    const std::size_t n = g.num_vertices();
    if (n > exact_vertex_cap)
        throw Error(Errc::SizeCap, "exact independence number limited to 64 vertices");
    const auto masks = detail::edge_masks(g);
    const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;

    std::uint64_t free_vertices = 0;
    for (Vertex v = 0; v < n; ++v)
        if (g.degree(v) == 0)
            free_vertices |= std::uint64_t{1} << v;

    std::uint64_t best = 0;
    for (Vertex v : greedy_independent_set(g))
        best |= std::uint64_t{1} << v;
    int best_size = std::popcount(best);

    detail::Deadline deadline(budget);
    bool aborted = false;
    std::vector<std::uint64_t> live;

    auto bb = [&](auto&& self, std::uint64_t chosen, std::uint64_t open) -> void {
        if (aborted)
            return;
        if (deadline.tick()) {
            aborted = true;
            return;
        }
        // forced exclusions
        for (std::uint64_t e : masks) {
            if ((e & ~(chosen | open)) != 0)
                continue;
            const std::uint64_t rest = e & open;
            if (std::popcount(rest) == 1)
                open &= ~rest;
        }
        live.clear();
        std::uint64_t covered = 0;
        for (std::uint64_t e : masks)
            if ((e & ~(chosen | open)) == 0) {
                live.push_back(e);
                covered |= e & open;
            }
        // undecided vertices outside every live edge are always safe
        chosen |= open & ~covered;
        open &= covered;
        if (live.empty()) {
            if (std::popcount(chosen) > best_size) {
                best = chosen;
                best_size = std::popcount(chosen);
            }
            return;
        }
        std::uint64_t used = 0;
        int disjoint = 0;
        for (int pass = 2; pass <= 3; ++pass)
            for (std::uint64_t e : live) {
                const std::uint64_t rest = e & open;
                if ((pass == 2) != (std::popcount(rest) == 2))
                    continue;
                if ((rest & used) == 0) {
                    used |= rest;
                    ++disjoint;
                }
            }
        if (std::popcount(chosen) + std::popcount(open) - disjoint <= best_size)
            return;

        // branch on the undecided vertex in the most live edges
        Vertex pick = 0;
        int pick_deg = -1;
        for (std::uint64_t rem = open; rem; rem &= rem - 1) {
            const auto v = static_cast<Vertex>(std::countr_zero(rem));
            int deg = 0;
            for (std::uint64_t e : live)
                deg += (e >> v) & 1;
            if (deg > pick_deg) {
                pick_deg = deg;
                pick = v;
            }
        }
        const std::uint64_t bit = std::uint64_t{1} << pick;
        std::vector<std::uint64_t> saved_live = live;
        self(self, chosen | bit, open & ~bit);
        live = std::move(saved_live);
        self(self, chosen, open & ~bit);
    };
    bb(bb, free_vertices, all & ~free_vertices);

    IndependenceResult out;
    out.alpha = static_cast<std::size_t>(best_size);
    out.witness.vertices = detail::mask_to_set(best);
    out.exact = !aborted;
    out.witness.certified_maximum = out.exact;
    out.nodes = deadline.nodes();
    // an aborted search only knows the trivial bound
    out.upper_bound = out.exact ? out.alpha : n;
    return out;
}

// ---------------------------------------------------------------------------
// Weak chromatic number

struct ChromaticResult {
    std::size_t chi = 0;
    Coloring coloring;
    /// chi >= lower_bound is proven; equal to chi when exact.
    std::size_t lower_bound = 0;
    bool exact = false;
    std::uint64_t nodes = 0;
};

namespace detail {

inline bool completes_mono_edge(const Hypergraph& g, const std::vector<Color>& colors, Vertex v, Color unset)
{
    for (EdgeId id : g.incident(v)) {
        const Edge& e = g.edge(id);
        bool mono = true;
        for (Vertex u : e)
            if (colors[u] == unset || colors[u] != colors[v]) {
                mono = false;
                break;
            }
        if (mono)
            return true;
    }
    return false;
}

inline std::vector<Vertex> by_degree_desc(const Hypergraph& g)
{
    std::vector<Vertex> order(g.num_vertices());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return g.degree(a) > g.degree(b); });
    return order;
}

} // namespace detail

/// First-fit proper coloring in descending degree order.
inline Coloring greedy_coloring(const Hypergraph& g)
{
    constexpr Color unset = ~Color{0};
    std::vector<Color> colors(g.num_vertices(), unset);
    Color top = 0;
    for (Vertex v : detail::by_degree_desc(g)) {
        for (Color c = 0;; ++c) {
            colors[v] = c;
            if (!detail::completes_mono_edge(g, colors, v, unset))
                break;
        }
        top = std::max(top, colors[v] + 1);
    }
    return Coloring{colors, top};
}

/// Exact weak chromatic number by iterative deepening on the palette size.
/// Vertices are colored in descending degree order; a vertex may only open
/// the next unused color, which fixes the first vertex to color 0.
inline ChromaticResult weak_chromatic_number(const Hypergraph& g, const SolverBudget& budget = {})
{
    const std::size_t n = g.num_vertices();
    ChromaticResult out;
    if (n == 0) {
        out.exact = true;
        return out;
    }
    if (g.num_edges() == 0) {
        out.chi = out.lower_bound = 1;
        out.coloring = Coloring{std::vector<Color>(n, 0), 1};
        out.exact = true;
        return out;
    }

    const Coloring fallback = greedy_coloring(g);
    const auto order = detail::by_degree_desc(g);
    constexpr Color unset = ~Color{0};
    detail::Deadline deadline(budget);

    for (std::size_t k = 2; k <= fallback.palette_size; ++k) {
        if (k == fallback.palette_size) {
            out.chi = out.lower_bound = k;
            out.coloring = fallback;
            out.exact = true;
            break;
        }
        std::vector<Color> colors(n, unset);
        bool aborted = false;
        auto place = [&](auto&& self, std::size_t depth, Color used) -> bool {
            if (deadline.tick()) {
                aborted = true;
                return false;
            }
            if (depth == n)
                return true;
            const Vertex v = order[depth];
            const Color limit = std::min<Color>(static_cast<Color>(k), used + 1);
            for (Color c = 0; c < limit; ++c) {
                colors[v] = c;
                if (!detail::completes_mono_edge(g, colors, v, unset)
                    && self(self, depth + 1, std::max<Color>(used, c + 1)))
                    return true;
                if (aborted)
                    break;
            }
            colors[v] = unset;
            return false;
        };
        if (place(place, 0, 0)) {
            out.chi = out.lower_bound = k;
            out.coloring = Coloring{colors, k};
            out.exact = true;
            break;
        }
        if (aborted) {
            out.chi = fallback.palette_size;
            out.coloring = fallback;
            out.lower_bound = k;
            break;
        }
    }
    out.nodes = deadline.nodes();
    return out;
}

// ---------------------------------------------------------------------------
// Degeneracy coloring

struct DegeneracyColoring {
    Coloring coloring;
    std::size_t degeneracy = 0;
    /// Smallest-last removal order.
    std::vector<Vertex> elimination_order;
};

/// Smallest-last ordering of a graph, then first-fit in reverse removal
/// order; uses at most degeneracy + 1 colors.
inline DegeneracyColoring degeneracy_coloring(const Hypergraph& graph)
{
    if (graph.rank() != 2)
        throw Error(Errc::InvalidArgument, "degeneracy coloring needs a 2-uniform hypergraph");
    const std::size_t n = graph.num_vertices();
    std::vector<std::vector<Vertex>> adj(n);
    for (const Edge& e : graph.edges()) {
        adj[e[0]].push_back(e[1]);
        adj[e[1]].push_back(e[0]);
    }
    std::vector<std::size_t> deg(n);
    std::set<std::pair<std::size_t, Vertex>> queue;
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = adj[v].size();
        queue.emplace(deg[v], v);
    }
    DegeneracyColoring out;
    std::vector<char> removed(n, 0);
    while (!queue.empty()) {
        auto [d, v] = *queue.begin();
        queue.erase(queue.begin());
        out.degeneracy = std::max(out.degeneracy, d);
        out.elimination_order.push_back(v);
        removed[v] = 1;
        for (Vertex u : adj[v]) {
            if (removed[u])
                continue;
            queue.erase({deg[u], u});
            queue.emplace(--deg[u], u);
        }
    }
    constexpr Color unset = ~Color{0};
    std::vector<Color> colors(n, unset);
    Color top = 0;
    std::vector<char> taken;
    for (auto it = out.elimination_order.rbegin(); it != out.elimination_order.rend(); ++it) {
        const Vertex v = *it;
        taken.assign(adj[v].size() + 1, 0);
        for (Vertex u : adj[v])
            if (colors[u] != unset && colors[u] < taken.size())
                taken[colors[u]] = 1;
        Color c = 0;
        while (taken[c])
            ++c;
        colors[v] = c;
        top = std::max(top, c + 1);
    }
    out.coloring = Coloring{std::move(colors), top};
    return out;
}

// ---------------------------------------------------------------------------
// Independent sets in hypergraphs with independent neighborhoods

struct TuranOptions {
    std::size_t trials = 32;
    /// Hosts up to this size fall back to the exact solver when the
    /// heuristics miss n^(1/r).
    std::size_t exact_cap = exact_vertex_cap;
    SolverBudget budget{};
};

struct TuranResult {
    IndependentSet set;
    /// "neighborhood", "deletion" or "exact"
    std::string source;
    bool neighborhoods_independent = false;
    bool escalated = false;
    /// |set| < n^(1/r) although the host has independent neighborhoods and
    /// exact search was unavailable.
    bool below_guarantee = false;
};

namespace detail {

/// |set|^r >= n
inline bool meets_root(std::size_t size, std::size_t n, std::size_t r)
{
    return ipow(size, r) >= cpp_int(n);
}

inline void extend_greedily(const Hypergraph& g, std::vector<char>& in)
{
    for (Vertex v = 0; v < g.num_vertices(); ++v) {
        if (in[v])
            continue;
        bool blocked = false;
        for (EdgeId id : g.incident(v)) {
            const Edge& e = g.edge(id);
            if (std::all_of(e.begin(), e.end(), [&](Vertex u) { return u == v || in[u]; })) {
                blocked = true;
                break;
            }
        }
        if (!blocked)
            in[v] = 1;
    }
}

} // namespace detail

/// Independent set of size at least n^(1/r) in a hypergraph with
/// independent neighborhoods: the larger of the biggest (r-1)-set
/// neighborhood and the best of several random-deletion sets (sample with
/// probability q maximising nq - mq^r, drop one vertex per surviving edge).
/// Both candidates are verified; exact search covers small hosts when the
/// heuristics fall short.
inline TuranResult turan_independent_set(const Hypergraph& g, std::uint64_t seed, const TuranOptions& opts = {})
{
    const std::size_t n = g.num_vertices();
    const std::size_t r = g.rank();
    const std::size_t m = g.num_edges();
    TuranResult out;
    out.neighborhoods_independent = independent_neighborhoods_check(g).independent;

    // (a) largest neighborhood
    {
        std::map<VertexSet, VertexSet> nbhd;
        for (const Edge& e : g.edges())
            for (std::size_t skip = 0; skip < r; ++skip) {
                VertexSet core;
                for (std::size_t j = 0; j < r; ++j)
                    if (j != skip)
                        core.push_back(e[j]);
                nbhd[core].push_back(e[skip]);
            }
        for (auto& [core, nb] : nbhd) {
            std::sort(nb.begin(), nb.end());
            if (nb.size() > out.set.vertices.size() && is_independent(g, nb)) {
                out.set.vertices = nb;
                out.source = "neighborhood";
            }
        }
    }

    // (b) random deletion
    if (n > 0) {
        double q = 1.0;
        if (m > 0)
            q = std::min(1.0, std::pow(static_cast<double>(n) / (static_cast<double>(r) * static_cast<double>(m)),
                                       1.0 / static_cast<double>(r - 1)));
        Rng rng(seed);
        std::vector<char> in(n);
        for (std::size_t trial = 0; trial < opts.trials; ++trial) {
            for (Vertex v = 0; v < n; ++v)
                in[v] = uniform01(rng) < q;
            for (const Edge& e : g.edges())
                if (std::all_of(e.begin(), e.end(), [&](Vertex u) { return in[u] != 0; }))
                    in[e.back()] = 0;
            detail::extend_greedily(g, in);
            VertexSet cand;
            for (Vertex v = 0; v < n; ++v)
                if (in[v])
                    cand.push_back(v);
            if (cand.size() > out.set.vertices.size()) {
                out.set.vertices = std::move(cand);
                out.source = "deletion";
            }
        }
    }

    if (out.neighborhoods_independent && !detail::meets_root(out.set.vertices.size(), n, r)) {
        if (n <= opts.exact_cap) {
            auto exact = independence_number(g, opts.budget);
            out.escalated = true;
            if (exact.alpha > out.set.vertices.size()) {
                out.set = exact.witness;
                out.source = "exact";
            }
            out.below_guarantee = !detail::meets_root(out.set.vertices.size(), n, r);
        } else {
            out.below_guarantee = true;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Peeling independent sets

/// Returns an independent set of the given hypergraph (in its labels).
using Extractor = std::function<VertexSet(const Hypergraph&)>;

/// Smallest integer B with B >= 2 n^(1 - alpha).
inline std::size_t peeling_palette_bound(std::size_t n, const Rational& alpha)
{
    if (n == 0)
        return 0;
    const auto num = static_cast<std::uint64_t>(alpha.numerator());
    const auto den = static_cast<std::uint64_t>(alpha.denominator());
    // B^den >= 2^den n^(den - num)
    const detail::cpp_int rhs = detail::ipow(2, den) * detail::ipow(n, den - num);
    auto b = static_cast<std::size_t>(std::floor(2.0 * std::pow(static_cast<double>(n), 1.0 - to_double(alpha))));
    b = b > 2 ? b - 2 : 0;
    while (detail::ipow(b, den) < rhs)
        ++b;
    return b;
}

/// Repeatedly extracts an independent set from the hypergraph induced on
/// the uncolored vertices and gives it a fresh color. The extractor must
/// return an independent set of size >= m^alpha on every m-vertex input.
inline Coloring recursive_coloring(const Hypergraph& g, const Extractor& extract, const Rational& alpha)
{
    if (alpha <= Rational(0) || alpha > Rational(1, 2))
        throw Error(Errc::InvalidArgument, "alpha must lie in (0, 1/2]");
    const std::size_t n = g.num_vertices();
    constexpr Color unset = ~Color{0};
    std::vector<Color> colors(n, unset);
    VertexSet remaining(n);
    std::iota(remaining.begin(), remaining.end(), 0);
    Color next = 0;
    while (!remaining.empty()) {
        auto sub = induced_subhypergraph(g, remaining);
        VertexSet picked = extract(sub.graph);
        const std::size_t m = remaining.size();
        bool sorted = std::adjacent_find(picked.begin(), picked.end(), std::greater_equal<Vertex>()) == picked.end();
        bool in_range = picked.empty() || picked.back() < m;
        if (!sorted || !in_range || !is_independent(sub.graph, picked) || !meets_power(picked.size(), m, alpha)
            || picked.empty()) {
            throw Error(Errc::ExtractorContractViolation,
                        "extractor returned " + std::to_string(picked.size()) + " vertices on a " + std::to_string(m)
                            + "-vertex subinstance (need an independent set of size >= m^" + to_string(alpha)
                            + "):\n" + serialize(sub.graph));
        }
        std::vector<char> gone(m, 0);
        for (Vertex v : picked) {
            colors[sub.to_host[v]] = next;
            gone[v] = 1;
        }
        VertexSet rest;
        for (Vertex i = 0; i < m; ++i)
            if (!gone[i])
                rest.push_back(sub.to_host[i]);
        remaining = std::move(rest);
        ++next;
    }
    return Coloring{std::move(colors), next};
}

// ---------------------------------------------------------------------------
// Local Lemma coloring

struct LllResult {
    Coloring coloring;
    std::uint64_t resamples = 0;
    bool proper = false;
};

/// max degree <= k^(r-1) / (4r), compared exactly.
inline bool lll_degree_condition(const Hypergraph& g, std::size_t k)
{
    return detail::cpp_int(g.max_degree()) * 4 * g.rank() <= detail::ipow(k, g.rank() - 1);
}

/// Random k-coloring repaired by resampling: while some edge is
/// monochromatic, recolor the vertices of the lowest such edge uniformly at
/// random. Deterministic given the seed.
inline LllResult lll_coloring(const Hypergraph& g, std::size_t k, std::uint64_t seed, const SolverBudget& budget = {},
                              bool enforce_precondition = true)
{
    if (k == 0)
        throw Error(Errc::InvalidArgument, "k must be positive");
    if (enforce_precondition && !lll_degree_condition(g, k))
        throw Error(Errc::PreconditionFailed,
                    "max degree " + std::to_string(g.max_degree()) + " exceeds k^(r-1)/(4r) for k = " + std::to_string(k));
    const std::size_t n = g.num_vertices();
    Rng rng(seed);
    LllResult out;
    std::vector<Color> colors(n);
    for (auto& c : colors)
        c = static_cast<Color>(uniform_below(rng, k));

    auto mono = [&](EdgeId id) {
        const Edge& e = g.edge(id);
        return std::all_of(e.begin() + 1, e.end(), [&](Vertex v) { return colors[v] == colors[e[0]]; });
    };
    std::set<EdgeId> bad;
    for (EdgeId id = 0; id < g.num_edges(); ++id)
        if (mono(id))
            bad.insert(id);
    while (!bad.empty() && out.resamples < budget.max_resamples) {
        const EdgeId id = *bad.begin();
        for (Vertex v : g.edge(id))
            colors[v] = static_cast<Color>(uniform_below(rng, k));
        ++out.resamples;
        for (Vertex v : g.edge(id))
            for (EdgeId f : g.incident(v)) {
                if (mono(f))
                    bad.insert(f);
                else
                    bad.erase(f);
            }
    }
    out.coloring = Coloring{std::move(colors), k};
    out.proper = bad.empty();
    return out;
}

// ---------------------------------------------------------------------------
// Two-stage coloring for hypergraphs with independent neighborhoods

struct IndNbdReport {
    std::size_t k = 0;
    /// Degree threshold k^(r-1) / (2r 2^r).
    double degree_threshold = 0;
    /// Vertices below the threshold (colored by the Local Lemma stage).
    VertexSet low_degree;
    std::size_t n_prime = 0;
    std::size_t stage1_palette = 0;
    std::size_t stage2_palette = 0;
    std::size_t stage2_bound = 0;
    std::uint64_t resamples = 0;
    /// 1 / (40 r^2 2^r)
    double b_i = 0;
    /// |E| <= b_I k^(r + 1/(r-1))
    bool premise_holds = false;
    /// n' <= r|E| / d
    bool vertex_bound_holds = false;
    /// total palette <= k
    bool within_k = false;
};

struct IndNbdColoring {
    Coloring coloring;
    IndNbdReport report;
};

/// Stage 1 colors the vertices of degree below k^(r-1)/(2r 2^r) with k/2
/// colors by lll_coloring; stage 2 peels the rest with
/// turan_independent_set at alpha = 1/r on a disjoint palette.
inline IndNbdColoring indnbd_coloring(const Hypergraph& g, std::size_t k, std::uint64_t seed,
                                      const SolverBudget& budget = {})
{
    if (k == 0 || k % 2 != 0)
        throw Error(Errc::InvalidArgument, "k must be positive and even");
    const auto check = independent_neighborhoods_check(g);
    if (!check.independent)
        throw Error(Errc::NotIndependentNeighborhoods, "host contains a copy of F_r");

    const std::size_t n = g.num_vertices();
    const std::size_t r = g.rank();
    IndNbdColoring out;
    IndNbdReport& rep = out.report;
    rep.k = k;
    const double two_r_pow = 2.0 * static_cast<double>(r) * std::pow(2.0, static_cast<double>(r));
    rep.degree_threshold = std::pow(static_cast<double>(k), static_cast<double>(r - 1)) / two_r_pow;
    rep.b_i = 1.0 / (40.0 * static_cast<double>(r * r) * std::pow(2.0, static_cast<double>(r)));
    const double premise = rep.b_i * std::pow(static_cast<double>(k), static_cast<double>(r) + 1.0 / static_cast<double>(r - 1));
    rep.premise_holds = static_cast<double>(g.num_edges()) <= premise;

    if (g.num_edges() == 0) {
        out.coloring = Coloring{std::vector<Color>(n, 0), n == 0 ? 0u : 1u};
        rep.low_degree.resize(n);
        std::iota(rep.low_degree.begin(), rep.low_degree.end(), 0);
        rep.stage1_palette = out.coloring.palette_size;
        rep.vertex_bound_holds = true;
        rep.within_k = out.coloring.palette_size <= k;
        return out;
    }

    // deg(v) < k^(r-1) / (2r 2^r), exactly
    const detail::cpp_int kpow = detail::ipow(k, r - 1);
    const detail::cpp_int scale = detail::cpp_int(2 * r) * detail::ipow(2, r);
    VertexSet high;
    for (Vertex v = 0; v < n; ++v) {
        if (detail::cpp_int(g.degree(v)) * scale < kpow)
            rep.low_degree.push_back(v);
        else
            high.push_back(v);
    }
    rep.n_prime = high.size();

    constexpr Color unset = ~Color{0};
    std::vector<Color> colors(n, unset);
    if (!rep.low_degree.empty()) {
        auto low = induced_subhypergraph(g, rep.low_degree);
        auto lll = lll_coloring(low.graph, k / 2, derive_seed(seed, streams::lll), budget);
        if (!lll.proper)
            throw Error(Errc::BudgetExceeded, "resampling did not converge within the cap");
        rep.resamples = lll.resamples;
        rep.stage1_palette = k / 2;
        for (Vertex i = 0; i < low.to_host.size(); ++i)
            colors[low.to_host[i]] = lll.coloring.colors[i];
    }
    if (!high.empty()) {
        auto rest = induced_subhypergraph(g, high);
        std::uint64_t call = 0;
        Extractor extract = [&](const Hypergraph& sub) {
            TuranOptions topts;
            topts.budget = budget;
            return turan_independent_set(sub, derive_seed(seed, streams::turan + call++), topts).set.vertices;
        };
        const Rational alpha(1, static_cast<std::int64_t>(r));
        Coloring peel = recursive_coloring(rest.graph, extract, alpha);
        rep.stage2_palette = peel.palette_size;
        for (Vertex i = 0; i < rest.to_host.size(); ++i)
            colors[rest.to_host[i]] = static_cast<Color>(rep.stage1_palette) + peel.colors[i];
    }
    rep.stage2_bound = peeling_palette_bound(rep.n_prime, Rational(1, static_cast<std::int64_t>(r)));
    // each high vertex carries at least d edge incidences
    rep.vertex_bound_holds = static_cast<double>(rep.n_prime) * rep.degree_threshold
        <= static_cast<double>(r * g.num_edges()) * (1 + 1e-12);
    out.coloring = Coloring{std::move(colors), rep.stage1_palette + rep.stage2_palette};
    rep.within_k = out.coloring.palette_size <= k;
    return out;
}

} // namespace hfree
