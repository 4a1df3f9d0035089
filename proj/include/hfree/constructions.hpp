#pragma once

#include "hfree/embeddings.hpp"
#include "hfree/hypergraph.hpp"
#include "hfree/invariants.hpp"
#include "hfree/random.hpp"
#include "hfree/solvers.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace hfree {

// ---------------------------------------------------------------------------
// Pattern generators

/// Two r-edges sharing exactly m vertices: {0..r-1} and {0..m-1, r..2r-m-1}.
inline Hypergraph gen_pair_overlap(std::size_t r, std::size_t m)
{
    if (r < 2 || m < 1 || m >= r)
        throw Error(Errc::InvalidArgument, "overlap needs 1 <= m < r");
    Edge a(r), b;
    std::iota(a.begin(), a.end(), 0);
    for (Vertex v = 0; v < m; ++v)
        b.push_back(v);
    for (Vertex v = static_cast<Vertex>(r); v < 2 * r - m; ++v)
        b.push_back(v);
    return Hypergraph(r, 2 * r - m, {a, b});
}

/// Pairs overlapping in l, l+1, ..., r-1 vertices; forbidding all of them
/// leaves exactly the r-graphs in which any two edges share fewer than l
/// vertices.
inline std::vector<Hypergraph> gen_rl_family(std::size_t r, std::size_t l)
{
    if (r < 2 || l < 1 || l >= r)
        throw Error(Errc::InvalidArgument, "(r,l) family needs 1 <= l < r");
    std::vector<Hypergraph> out;
    for (std::size_t m = l; m < r; ++m)
        out.push_back(gen_pair_overlap(r, m));
    return out;
}

/// F_r: core A = {0..r-2}, edges A + {x} for each tip x in {r-1..2r-2},
/// plus the edge of all r tips.
inline Hypergraph gen_Fr(std::size_t r)
{
    if (r < 2)
        throw Error(Errc::InvalidArgument, "F_r needs r >= 2");
    std::vector<Edge> edges;
    Edge tips;
    for (std::size_t i = 0; i < r; ++i) {
        Edge e;
        for (Vertex v = 0; v + 1 < r; ++v)
            e.push_back(v);
        const auto tip = static_cast<Vertex>(r - 1 + i);
        e.push_back(tip);
        tips.push_back(tip);
        edges.push_back(std::move(e));
    }
    edges.push_back(std::move(tips));
    return Hypergraph(r, 2 * r - 1, std::move(edges));
}

/// All r-subsets of {0..t-1} in lexicographic order.
inline std::vector<Edge> all_subsets(std::size_t t, std::size_t r)
{
    std::vector<Edge> out;
    if (r > t)
        return out;
    Edge cur(r);
    std::iota(cur.begin(), cur.end(), 0);
    for (;;) {
        out.push_back(cur);
        std::size_t i = r;
        while (i > 0 && cur[i - 1] == t - r + i - 1)
            --i;
        if (i == 0)
            return out;
        ++cur[i - 1];
        for (std::size_t j = i; j < r; ++j)
            cur[j] = cur[j - 1] + 1;
    }
}

inline Hypergraph gen_clique(std::size_t r, std::size_t t)
{
    if (r < 2 || t < r)
        throw Error(Errc::InvalidArgument, "clique needs t >= r >= 2");
    return Hypergraph(r, t, all_subsets(t, r));
}

/// Loose path: consecutive edges share exactly one vertex.
inline Hypergraph gen_loose_path(std::size_t r, std::size_t t)
{
    if (r < 2 || t < 1)
        throw Error(Errc::InvalidArgument, "path needs r >= 2, t >= 1");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < t; ++i) {
        Edge e(r);
        std::iota(e.begin(), e.end(), static_cast<Vertex>(i * (r - 1)));
        edges.push_back(std::move(e));
    }
    return Hypergraph(r, (r - 1) * t + 1, std::move(edges));
}

/// t edges through vertex 0, otherwise disjoint.
inline Hypergraph gen_star(std::size_t r, std::size_t t)
{
    if (r < 2 || t < 1)
        throw Error(Errc::InvalidArgument, "star needs r >= 2, t >= 1");
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < t; ++i) {
        Edge e{0};
        for (std::size_t j = 0; j + 1 < r; ++j)
            e.push_back(static_cast<Vertex>(1 + i * (r - 1) + j));
        edges.push_back(std::move(e));
    }
    return Hypergraph(r, (r - 1) * t + 1, std::move(edges));
}

namespace detail {

inline std::vector<std::size_t> spec_numbers(const std::string& spec, std::size_t start)
{
    std::vector<std::size_t> out;
    std::size_t pos = start;
    while (pos <= spec.size()) {
        std::size_t end = spec.find(':', pos);
        if (end == std::string::npos)
            end = spec.size();
        const std::string tok = spec.substr(pos, end - pos);
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw Error(Errc::InvalidArgument, "bad pattern spec '" + spec + "'");
        out.push_back(std::stoul(tok));
        pos = end + 1;
    }
    return out;
}

} // namespace detail

/// `fr:R`, `clique:R:T`, `overlap:R:M`, `path:R:T`, `star:R:T`, or a
/// hypergraph file path.
inline Hypergraph pattern_from_spec(const std::string& spec)
{
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    auto args = [&](std::size_t count) {
        if (colon == std::string::npos)
            throw Error(Errc::InvalidArgument, "bad pattern spec '" + spec + "'");
        auto v = detail::spec_numbers(spec, colon + 1);
        if (v.size() != count)
            throw Error(Errc::InvalidArgument, "bad pattern spec '" + spec + "'");
        return v;
    };
    if (kind == "fr")
        return gen_Fr(args(1)[0]);
    if (kind == "clique") {
        auto a = args(2);
        return gen_clique(a[0], a[1]);
    }
    if (kind == "overlap") {
        auto a = args(2);
        return gen_pair_overlap(a[0], a[1]);
    }
    if (kind == "path") {
        auto a = args(2);
        return gen_loose_path(a[0], a[1]);
    }
    if (kind == "star") {
        auto a = args(2);
        return gen_star(a[0], a[1]);
    }
    return read_hypergraph(spec);
}

/// `rl:R:L` for the (r,l) family, otherwise a comma-separated list of
/// pattern specs.
inline std::vector<Hypergraph> family_from_spec(const std::string& spec)
{
    if (spec.rfind("rl:", 0) == 0) {
        auto a = detail::spec_numbers(spec, 3);
        if (a.size() != 2)
            throw Error(Errc::InvalidArgument, "bad family spec '" + spec + "'");
        return gen_rl_family(a[0], a[1]);
    }
    std::vector<Hypergraph> out;
    std::size_t pos = 0;
    while (pos <= spec.size()) {
        std::size_t end = spec.find(',', pos);
        if (end == std::string::npos)
            end = spec.size();
        out.push_back(pattern_from_spec(spec.substr(pos, end - pos)));
        pos = end + 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Constants of the deletion construction

inline double factorial(std::size_t k)
{
    double f = 1;
    for (std::size_t i = 2; i <= k; ++i)
        f *= static_cast<double>(i);
    return f;
}

/// x (x-1) ... (x-k+1) / k!, for real x.
inline long double binom_real(long double x, std::size_t k)
{
    long double out = 1;
    for (std::size_t j = 0; j < k; ++j)
        out *= (x - static_cast<long double>(j)) / static_cast<long double>(j + 1);
    return out;
}

struct C1Solution {
    double value = 0;
    /// |lhs(value) - rhs| / rhs
    double relative_residual = 0;
};

/// Positive root of sum_{i<=s} e_i x^(e_i - 1) / alpha_i = 1 / (50 r!).
/// The left side increases strictly from 0, so bisection finds it.
inline C1Solution solve_c1(const FamilyProfile& profile)
{
    if (profile.s == 0 || profile.members.empty())
        throw Error(Errc::InvalidArgument, "profile has no minimal members");
    const long double rhs = 1.0L / (50.0L * static_cast<long double>(factorial(profile.r)));
    auto lhs = [&](long double x) {
        long double sum = 0;
        for (std::size_t j = 0; j < profile.s; ++j) {
            const auto& mp = profile.members[profile.order[j]];
            sum += static_cast<long double>(mp.edges) * std::pow(x, static_cast<long double>(mp.edges - 1))
                / static_cast<long double>(mp.alpha);
        }
        return sum;
    };
    long double lo = 0, hi = 1;
    while (lhs(hi) < rhs)
        hi *= 2;
    for (int it = 0; it < 400 && hi - lo > 1e-17L * hi; ++it) {
        const long double mid = (lo + hi) / 2;
        (lhs(mid) < rhs ? lo : hi) = mid;
    }
    const long double x = (lo + hi) / 2;
    return C1Solution{static_cast<double>(x), static_cast<double>(std::fabs(lhs(x) - rhs) / rhs)};
}

/// max_{i<=s} (alpha_i / (5 e_i c1^(e_i - 1) r!))^(1/(r-1))
inline double compute_c2(const FamilyProfile& profile, double c1)
{
    double best = 0;
    const double rf = factorial(profile.r);
    for (std::size_t j = 0; j < profile.s; ++j) {
        const auto& mp = profile.members[profile.order[j]];
        const double base = static_cast<double>(mp.alpha)
            / (5.0 * static_cast<double>(mp.edges) * std::pow(c1, static_cast<double>(mp.edges - 1)) * rf);
        best = std::max(best, std::pow(base, 1.0 / static_cast<double>(profile.r - 1)));
    }
    return best;
}

/// Leading constant of the edge bound as a function of r, 1/rho, c1, c2.
inline double generic_c_h(std::size_t r, double inv_rho, double c1, double c2)
{
    const double rr = static_cast<double>(r);
    const double d = rr - 1 - inv_rho;
    return 2.0 * std::pow(factorial(r) / c1, 1.0 / d) * std::pow(c2, (rr - 1) * (rr - inv_rho) / d)
        * std::pow((rr - 1) / d, (rr - inv_rho) / d);
}

enum class Infeasibility { UnbalancedMember, DensityTooLow, PGreaterThanOne, TGreaterThanN };

constexpr std::string_view to_string(Infeasibility why) noexcept
{
    switch (why) {
    case Infeasibility::UnbalancedMember: return "UnbalancedMember";
    case Infeasibility::DensityTooLow: return "DensityTooLow";
    case Infeasibility::PGreaterThanOne: return "PGreaterThanOne";
    case Infeasibility::TGreaterThanN: return "TGreaterThanN";
    }
    return "Unknown";
}

struct PlanOverrides {
    std::optional<double> p;
    std::optional<double> t;

    bool any() const { return p.has_value() || t.has_value(); }
};

struct ConstructionPlan {
    std::size_t r = 0;
    std::size_t n = 0;
    std::vector<Hypergraph> family;
    FamilyProfile profile;
    double c1 = 0;
    double c1_residual = 0;
    double c2 = 0;
    double inv_rho = 0;
    double p = 0;
    /// Independence target; set operations use t_ceil.
    double t = 0;
    std::size_t t_ceil = 0;
    /// C(t, r) p / 2
    double e0 = 0;
    /// Indexed like the family.
    std::vector<double> mu;
    double predicted_k = 0;
    double c_h = 0;
    /// c_H (k^(r-1) log k)^((r - 1/rho)/(r - 1 - 1/rho))
    double predicted_edge_bound = 0;
    /// 2 c1 n^(r - 1/rho) / r!
    double bound_edge_count = 0;
    bool feasible = false;
    std::vector<Infeasibility> reasons;
    PlanOverrides overrides;
};

/// Evaluates every constant of the random deletion construction for the
/// given family and host size. Asymptotic constants are usually infeasible
/// at small n; the plan reports why instead of clamping. Overrides replace
/// p and/or t and everything downstream is recomputed from them.
inline ConstructionPlan plan_construction(std::vector<Hypergraph> family, std::size_t n,
                                          const PlanOverrides& overrides = {})
{
    ConstructionPlan plan;
    plan.profile = family_profile(family);
    plan.family = std::move(family);
    plan.r = plan.profile.r;
    plan.n = n;
    plan.overrides = overrides;
    if (n < 2)
        throw Error(Errc::InvalidArgument, "plan needs n >= 2");

    if (!plan.profile.all_balanced)
        plan.reasons.push_back(Infeasibility::UnbalancedMember);
    if (!plan.profile.dense_enough)
        plan.reasons.push_back(Infeasibility::DensityTooLow);

    const std::size_t r = plan.r;
    const double rr = static_cast<double>(r);
    const double nn = static_cast<double>(n);
    const double rf = factorial(r);
    const auto c1 = solve_c1(plan.profile);
    plan.c1 = c1.value;
    plan.c1_residual = c1.relative_residual;
    plan.c2 = compute_c2(plan.profile, plan.c1);
    plan.inv_rho = 1.0 / to_double(plan.profile.rho);

    plan.p = overrides.p.value_or(plan.c1 * std::pow(nn, -plan.inv_rho));
    plan.t = overrides.t.value_or(plan.c2 * std::pow(rf * std::log(nn) / plan.p, 1.0 / (rr - 1)));
    plan.t_ceil = static_cast<std::size_t>(std::ceil(plan.t - 1e-9));
    const long double ct = binom_real(plan.t, r);
    plan.e0 = static_cast<double>(ct * plan.p / 2);

    for (std::size_t i = 0; i < plan.family.size(); ++i) {
        const auto& mp = plan.profile.members[i];
        const std::size_t extra = mp.vertices - r;
        // C(n, v-r) (v-r)! = falling factorial
        long double fall = 1;
        for (std::size_t j = 0; j < extra; ++j)
            fall *= static_cast<long double>(nn - static_cast<double>(j));
        const long double mu = ct * fall * static_cast<long double>(mp.edges)
            * std::pow(static_cast<long double>(plan.p), static_cast<long double>(mp.edges))
            * static_cast<long double>(rf) / static_cast<long double>(mp.alpha);
        plan.mu.push_back(static_cast<double>(mu));
    }

    plan.predicted_k = nn / plan.t;
    plan.bound_edge_count = 2 * plan.c1 * std::pow(nn, rr - plan.inv_rho) / rf;
    const double d = rr - 1 - plan.inv_rho;
    if (d > 0) {
        plan.c_h = generic_c_h(r, plan.inv_rho, plan.c1, plan.c2);
        const double k = plan.predicted_k;
        plan.predicted_edge_bound = k > 1 ? plan.c_h * std::pow(std::pow(k, rr - 1) * std::log(k), (rr - plan.inv_rho) / d)
                                          : std::numeric_limits<double>::quiet_NaN();
    } else {
        plan.c_h = std::numeric_limits<double>::quiet_NaN();
        plan.predicted_edge_bound = std::numeric_limits<double>::quiet_NaN();
    }

    if (!(plan.p >= 0 && plan.p <= 1))
        plan.reasons.push_back(Infeasibility::PGreaterThanOne);
    if (plan.t_ceil > n)
        plan.reasons.push_back(Infeasibility::TGreaterThanN);
    plan.feasible = plan.reasons.empty();
    return plan;
}

// ---------------------------------------------------------------------------
// Random hypergraphs

/// C(n, k) if it fits in 62 bits.
inline std::optional<std::uint64_t> binom_u64(std::uint64_t n, std::uint64_t k)
{
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 out = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        out = out * (n - k + i) / i;
        if (out > (static_cast<unsigned __int128>(1) << 62))
            return std::nullopt;
    }
    return static_cast<std::uint64_t>(out);
}

/// The rank-th r-subset of {0..n-1} in lexicographic order.
inline Edge unrank_subset(std::uint64_t rank, std::size_t n, std::size_t r)
{
    Edge out;
    Vertex c = 0;
    for (std::size_t j = 0; j < r; ++j) {
        for (;; ++c) {
            const std::uint64_t count = *binom_u64(n - c - 1, r - j - 1);
            if (rank < count)
                break;
            rank -= count;
        }
        out.push_back(c++);
    }
    return out;
}

/// Each of the C(n, r) possible edges independently with probability p,
/// generated by geometric skipping over lexicographic ranks.
inline Hypergraph sample_random_hypergraph(std::size_t n, std::size_t r, double p, std::uint64_t seed)
{
    if (!(p >= 0 && p <= 1))
        throw Error(Errc::InvalidArgument, "p must lie in [0, 1]");
    const auto total = binom_u64(n, r);
    if (!total)
        throw Error(Errc::SizeCap, "too many potential edges");
    std::vector<Edge> edges;
    if (p == 0 || *total == 0)
        return Hypergraph(r, n, {});
    if (p == 1)
        return Hypergraph(r, n, all_subsets(n, r));
    Rng rng(seed);
    const double log_q = std::log1p(-p);
    std::uint64_t idx = 0;
    for (;;) {
        const double u = 1.0 - uniform01(rng);   // (0, 1]
        const double skip = std::floor(std::log(u) / log_q);
        if (skip >= static_cast<double>(*total - idx))
            break;
        idx += static_cast<std::uint64_t>(skip);
        edges.push_back(unrank_subset(idx, n, r));
        if (++idx >= *total)
            break;
    }
    return Hypergraph(r, n, std::move(edges));
}

// ---------------------------------------------------------------------------
// Deletion construction

enum class VerifyLevel { None, Freeness, Full };

struct PackingSummary {
    std::size_t host_copies = 0;
    std::size_t packed = 0;
    std::size_t packed_edges = 0;
    bool maximal = false;
};

struct AlphaCertificate {
    bool computed = false;
    bool exact = false;
    /// Exact independence number when `exact`.
    std::size_t value = 0;
    /// Sampled t_ceil-sets and how many of them were independent.
    std::size_t sampled_sets = 0;
    std::size_t sampled_independent = 0;
};

struct DeletionResult {
    Hypergraph sampled;
    Hypergraph final;
    std::size_t removed_edges = 0;
    /// Indexed like the plan's family.
    std::vector<PackingSummary> packings;
    bool freeness_checked = false;
    std::vector<bool> member_free;
    AlphaCertificate alpha;
    std::size_t edge_count = 0;
    double bound_edge_count = 0;
};

struct DeletionOptions {
    SolverBudget budget{};
    std::size_t alpha_samples = 2000;
    EmbedOptions embed{};
};

/// Samples G_p, packs each member maximally and edge-disjointly into the
/// sample itself, and deletes the union of all packed edges. Every copy in
/// the result would be edge-disjoint from a packing that was maximal in
/// G_p, so the result is free of every member.
inline DeletionResult deletion_construct(const ConstructionPlan& plan, std::uint64_t seed, VerifyLevel verify,
                                         const DeletionOptions& opts = {})
{
    if (!plan.feasible && !plan.overrides.any())
        throw Error(Errc::PlanInfeasible, "plan is infeasible and has no overrides");
    if (!(plan.p >= 0 && plan.p <= 1))
        throw Error(Errc::PlanInfeasible, "p outside [0, 1]");

    DeletionResult out;
    out.sampled = sample_random_hypergraph(plan.n, plan.r, plan.p, derive_seed(seed, streams::sample));
    std::vector<EdgeId> doomed;
    for (std::size_t i = 0; i < plan.family.size(); ++i) {
        const Packing pk = max_edge_disjoint_packing(out.sampled, plan.family[i],
                                                     derive_seed(seed, streams::packing + i), opts.embed);
        const auto es = pk.edge_set();
        out.packings.push_back(PackingSummary{pk.host_copies, pk.copies.size(), es.size(), pk.maximal});
        doomed.insert(doomed.end(), es.begin(), es.end());
    }
    std::sort(doomed.begin(), doomed.end());
    doomed.erase(std::unique(doomed.begin(), doomed.end()), doomed.end());
    out.final = remove_edges(out.sampled, doomed);
    out.removed_edges = doomed.size();
    out.edge_count = out.final.num_edges();
    out.bound_edge_count = plan.bound_edge_count;

    if (verify != VerifyLevel::None) {
        out.freeness_checked = true;
        for (const auto& h : plan.family)
            out.member_free.push_back(!contains_copy(out.final, h, opts.embed).has_value());
    }
    if (verify == VerifyLevel::Full) {
        out.alpha.computed = true;
        if (plan.n <= exact_vertex_cap) {
            auto res = independence_number(out.final, opts.budget);
            out.alpha.exact = res.exact;
            out.alpha.value = res.alpha;
        }
        if (!out.alpha.exact && plan.t_ceil <= plan.n) {
            Rng rng = make_rng(seed, streams::alpha_probe);
            std::vector<Vertex> pool(plan.n);
            for (std::size_t s = 0; s < opts.alpha_samples; ++s) {
                std::iota(pool.begin(), pool.end(), 0);
                for (std::size_t j = 0; j < plan.t_ceil; ++j)
                    std::swap(pool[j], pool[j + uniform_below(rng, plan.n - j)]);
                VertexSet pick(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(plan.t_ceil));
                std::sort(pick.begin(), pick.end());
                ++out.alpha.sampled_sets;
                out.alpha.sampled_independent += is_independent(out.final, pick);
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Layered K_{r+1}^r-free construction

struct CliqueFreeResult {
    Hypergraph graph;
    /// layers[i] = the r-1 parts partitioning {i+1, ..., n-1}.
    std::vector<std::vector<VertexSet>> layers;
};

/// For each vertex i, split the later vertices at random into r-1 parts of
/// near-equal size (larger parts first) and add every edge taking i plus
/// one vertex from each part. Two vertices of any (r+1)-set share a part of
/// its smallest vertex's layer, so no K_{r+1}^r appears.
inline CliqueFreeResult clique_free_construct(std::size_t n, std::size_t r, std::uint64_t seed)
{
    if (r < 3 || n < r)
        throw Error(Errc::InvalidArgument, "clique-free construction needs r >= 3 and n >= r");
    Rng rng = make_rng(seed, streams::layers);
    CliqueFreeResult out;
    std::vector<Edge> edges;
    const std::size_t parts = r - 1;
    for (Vertex i = 0; i < n; ++i) {
        std::vector<Vertex> rest;
        for (Vertex v = i + 1; v < n; ++v)
            rest.push_back(v);
        shuffle(std::span<Vertex>(rest), rng);
        const std::size_t base = rest.size() / parts;
        const std::size_t extra = rest.size() % parts;
        std::vector<VertexSet> layer(parts);
        std::size_t pos = 0;
        for (std::size_t j = 0; j < parts; ++j) {
            const std::size_t size = base + (j < extra ? 1 : 0);
            layer[j].assign(rest.begin() + static_cast<std::ptrdiff_t>(pos),
                            rest.begin() + static_cast<std::ptrdiff_t>(pos + size));
            std::sort(layer[j].begin(), layer[j].end());
            pos += size;
        }
        if (base > 0) {
            std::vector<std::size_t> pick(parts, 0);
            for (;;) {
                Edge e{i};
                for (std::size_t j = 0; j < parts; ++j)
                    e.push_back(layer[j][pick[j]]);
                edges.push_back(std::move(e));
                std::size_t j = parts;
                while (j > 0 && ++pick[j - 1] == layer[j - 1].size())
                    pick[--j] = 0;
                if (j == 0)
                    break;
            }
        }
        out.layers.push_back(std::move(layer));
    }
    out.graph = Hypergraph(r, n, std::move(edges));
    return out;
}

/// |E| < n^r / (r-1)^(r-1), exactly.
inline bool clique_free_edge_bound_holds(std::size_t edges, std::size_t n, std::size_t r)
{
    return detail::cpp_int(edges) * detail::ipow(r - 1, r - 1) < detail::ipow(n, r);
}

/// Each layer partitions {i+1..n-1} into parts whose sizes differ by <= 1.
inline bool layers_partition_correctly(const CliqueFreeResult& res, std::size_t n)
{
    if (res.layers.size() != n)
        return false;
    for (std::size_t i = 0; i < n; ++i) {
        VertexSet all;
        std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
        for (const auto& part : res.layers[i]) {
            all.insert(all.end(), part.begin(), part.end());
            lo = std::min(lo, part.size());
            hi = std::max(hi, part.size());
        }
        std::sort(all.begin(), all.end());
        VertexSet want;
        for (auto v = static_cast<Vertex>(i + 1); v < n; ++v)
            want.push_back(v);
        if (all != want || hi - lo > 1)
            return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Closed-form constants

/// (r)_l = r (r-1) ... (r-l+1)
inline double falling(std::size_t r, std::size_t l)
{
    double out = 1;
    for (std::size_t j = 0; j < l; ++j)
        out *= static_cast<double>(r - j);
    return out;
}

/// Edge-bound constant for (r,l)-systems.
inline double c_rl(std::size_t r, std::size_t l)
{
    const double ll = static_cast<double>(l);
    return 2.0 * std::pow(100.0 * falling(r, l) * falling(r, l) / factorial(l), 1.0 / (ll - 1))
        * std::pow(10.0 * static_cast<double>(r - 1) / (ll - 1), ll / (ll - 1));
}

/// Earlier (r,l)-system constant, 2 (2 r^(3l))^(l/(l-1)) / (r)_l.
inline double b_rl(std::size_t r, std::size_t l)
{
    const double ll = static_cast<double>(l);
    return 2.0 * std::pow(2.0 * std::pow(static_cast<double>(r), 3.0 * ll), ll / (ll - 1)) / falling(r, l);
}

/// Lower-bound constant for independent neighborhoods, 1 / (40 r^2 2^r).
inline double b_indnbd(std::size_t r)
{
    const double rr = static_cast<double>(r);
    return 1.0 / (40.0 * rr * rr * std::pow(2.0, rr));
}

/// Closed-form upper-bound constant for independent neighborhoods.
inline double c_indnbd(std::size_t r)
{
    const double rr = static_cast<double>(r);
    const double inner = factorial(r)
        * std::pow(50.0 * factorial(r) * (rr + 1) / (factorial(r - 1) * factorial(r - 1)), 1.0 / rr);
    return std::pow(inner, 1.0 / (rr - 1.5)) * std::pow(10.0 * (rr - 1) / (rr - 1.5), (rr - 0.5) / (rr - 1.5));
}

/// Upper bound 5^r r^r / (r-1)^(r-1) on the clique-free constant d_r.
inline double d_r_bound(std::size_t r)
{
    const double rr = static_cast<double>(r);
    return std::pow(5.0, rr) * std::pow(rr, rr) / std::pow(rr - 1, rr - 1);
}

struct ConstantRow {
    std::string name;
    double value = 0;
    /// Same quantity from the generic pipeline, when one exists.
    std::optional<double> generic;
    std::optional<double> relative_difference;
    std::string note;
};

struct ConstantsTable {
    std::vector<ConstantRow> rows;
    /// Every row with a generic counterpart agrees to this tolerance.
    double tolerance = 1e-9;
    bool consistent = true;
};

struct ConstantsSpec {
    enum class Kind { RL, FR } kind = Kind::RL;
    std::size_t r = 3;
    std::size_t l = 2;
};

namespace detail {

inline void add_row(ConstantsTable& table, std::string name, double value, std::optional<double> generic,
                    std::string note = {})
{
    ConstantRow row{std::move(name), value, generic, std::nullopt, std::move(note)};
    if (row.generic) {
        row.relative_difference = std::fabs(row.value - *row.generic) / std::fabs(*row.generic);
        if (!(*row.relative_difference <= table.tolerance))
            table.consistent = false;
    }
    table.rows.push_back(std::move(row));
}

} // namespace detail

/// Evaluates the closed forms and, where one is an instance of the general
/// deletion constant, recomputes that constant from first principles
/// (solve_c1, compute_c2, generic_c_h) for comparison.
inline ConstantsTable closed_form_constants(const ConstantsSpec& spec)
{
    ConstantsTable table;
    const std::size_t r = spec.r;
    if (spec.kind == ConstantsSpec::Kind::RL) {
        const std::size_t l = spec.l;
        if (l < 2 || l >= r)
            throw Error(Errc::InvalidArgument, "closed forms for (r,l)-systems need 2 <= l < r");
        const auto profile = family_profile(gen_rl_family(r, l));
        const auto c1 = solve_c1(profile);
        const double c2 = compute_c2(profile, c1.value);
        const double inv_rho = 1.0 / to_double(profile.rho);
        const double lf = factorial(l), rlf = factorial(r - l);
        detail::add_row(table, "c1", c1.value, lf * rlf * rlf / (100.0 * factorial(r)), "");
        detail::add_row(table, "c2", c2, std::pow(10.0, 1.0 / static_cast<double>(r - 1)), "");
        detail::add_row(table, "c_rl", c_rl(r, l), generic_c_h(r, inv_rho, c1.value, c2), "");
        detail::add_row(table, "b_rl", b_rl(r, l), {}, "");
        return table;
    }

    if (r < 3)
        throw Error(Errc::InvalidArgument, "independent-neighborhood constants need r >= 3");
    const double rr = static_cast<double>(r);
    const auto profile = family_profile(std::vector<Hypergraph>{gen_Fr(r)});
    const auto c1 = solve_c1(profile);
    const double c2 = compute_c2(profile, c1.value);
    const double c1_closed = std::pow(factorial(r - 1) * factorial(r - 1) / (50.0 * factorial(r) * (rr + 1)), 1.0 / rr);
    detail::add_row(table, "c1", c1.value, c1_closed, "");
    detail::add_row(table, "c2", c2, std::pow(10.0, 1.0 / (rr - 1)), "");
    detail::add_row(table, "rho", to_double(profile.rho), {},
                    "computed exactly as " + to_string(profile.rho) + "; the c_I display uses rho = 2");
    detail::add_row(table, "c_I", c_indnbd(r), generic_c_h(r, 0.5, c1.value, c2),
                    "generic constant evaluated at rho = 2");
    detail::add_row(table, "c_H(F_r)", generic_c_h(r, 1.0 / to_double(profile.rho), c1.value, c2), {},
                    "generic constant at the computed rho");
    detail::add_row(table, "b_I", b_indnbd(r), {}, "");
    detail::add_row(table, "d_r_bound", d_r_bound(r), {}, "");
    return table;
}

} // namespace hfree
