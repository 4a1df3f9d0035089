#pragma once

#include "hfree/constructions.hpp"
#include "hfree/invariants.hpp"
#include "hfree/solvers.hpp"
#include "hfree/treecolor.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <sstream>
#include <string>

namespace hfree {

using json = nlohmann::ordered_json;

inline constexpr std::string_view certificate_schema = "hfree-certificate/1";

/// Non-finite doubles become null so every report stays valid JSON.
inline json number(double x)
{
    if (!std::isfinite(x))
        return nullptr;
    return x;
}

inline json graph_summary(const Hypergraph& g)
{
    return json{{"r", g.rank()}, {"n", g.num_vertices()}, {"m", g.num_edges()}};
}

inline json coloring_certificate(const Hypergraph& g, const Coloring& c)
{
    json out{{"schema", certificate_schema}, {"kind", "coloring"}, {"graph", graph_summary(g)}};
    out["palette_size"] = c.palette_size;
    out["colors"] = c.colors;
    out["classes"] = c.classes();
    const auto bad = monochromatic_edge(g, c);
    out["proper"] = !bad.has_value();
    if (bad)
        out["monochromatic_edge"] = g.edge(*bad);
    return out;
}

inline json independent_set_certificate(const Hypergraph& g, const IndependentSet& s)
{
    json out{{"schema", certificate_schema}, {"kind", "independent_set"}, {"graph", graph_summary(g)}};
    out["size"] = s.vertices.size();
    out["vertices"] = s.vertices;
    out["independent"] = is_independent(g, s.vertices);
    out["certified_maximum"] = s.certified_maximum;
    return out;
}

inline json density_json(const DensityReport& d)
{
    return json{{"rho", to_string(d.rho)}, {"witness", d.witness}, {"whole", to_string(d.whole)},
                {"balanced", d.balanced}};
}

inline json profile_json(const FamilyProfile& p)
{
    json members = json::array();
    for (const auto& m : p.members)
        members.push_back(json{{"vertices", m.vertices}, {"edges", m.edges}, {"rho", to_string(m.rho)},
                               {"alpha", m.alpha}, {"balanced", m.balanced}});
    return json{{"r", p.r}, {"rho", to_string(p.rho)}, {"s", p.s}, {"order", p.order}, {"members", members},
                {"all_balanced", p.all_balanced}, {"dense_enough", p.dense_enough}};
}

inline json plan_json(const ConstructionPlan& plan)
{
    json reasons = json::array();
    for (auto why : plan.reasons)
        reasons.push_back(std::string(to_string(why)));
    json overrides = json::object();
    if (plan.overrides.p)
        overrides["p"] = *plan.overrides.p;
    if (plan.overrides.t)
        overrides["t"] = *plan.overrides.t;
    json mu = json::array();
    for (double x : plan.mu)
        mu.push_back(number(x));
    return json{{"r", plan.r},
                {"n", plan.n},
                {"profile", profile_json(plan.profile)},
                {"c1", number(plan.c1)},
                {"c1_relative_residual", number(plan.c1_residual)},
                {"c2", number(plan.c2)},
                {"inv_rho", number(plan.inv_rho)},
                {"p", number(plan.p)},
                {"t", number(plan.t)},
                {"t_ceil", plan.t_ceil},
                {"E0", number(plan.e0)},
                {"mu", mu},
                {"predicted_k", number(plan.predicted_k)},
                {"c_H", number(plan.c_h)},
                {"predicted_edge_bound", number(plan.predicted_edge_bound)},
                {"bound_edge_count", number(plan.bound_edge_count)},
                {"feasible", plan.feasible},
                {"reasons", reasons},
                {"overrides", overrides}};
}

inline json deletion_json(const DeletionResult& res)
{
    json packings = json::array();
    for (const auto& p : res.packings)
        packings.push_back(json{{"host_copies", p.host_copies}, {"packed", p.packed},
                                {"packed_edges", p.packed_edges}, {"maximal", p.maximal}});
    json out{{"schema", certificate_schema},
             {"kind", "deletion"},
             {"sampled_edges", res.sampled.num_edges()},
             {"final", graph_summary(res.final)},
             {"removed_edges", res.removed_edges},
             {"packings", packings},
             {"bound_edge_count", number(res.bound_edge_count)}};
    if (res.freeness_checked)
        out["member_free"] = res.member_free;
    if (res.alpha.computed) {
        json a{{"exact", res.alpha.exact}};
        if (res.alpha.exact)
            a["value"] = res.alpha.value;
        else
            a.update(json{{"sampled_sets", res.alpha.sampled_sets},
                          {"sampled_independent", res.alpha.sampled_independent}});
        out["alpha"] = a;
    }
    return out;
}

inline json clique_free_json(const CliqueFreeResult& res, std::optional<bool> free)
{
    const std::size_t n = res.graph.num_vertices();
    const std::size_t r = res.graph.rank();
    json out{{"schema", certificate_schema},
             {"kind", "clique_free"},
             {"graph", graph_summary(res.graph)},
             {"edge_bound_holds", clique_free_edge_bound_holds(res.graph.num_edges(), n, r)},
             {"partitions_ok", layers_partition_correctly(res, n)}};
    if (free)
        out["clique_free"] = *free;
    out["layers"] = res.layers;
    return out;
}

inline json tree_trace_json(const TreeColoringResult& res)
{
    const auto& tr = res.trace;
    json x = json::object();
    for (Vertex v = 0; v < tr.x_sets.size(); ++v)
        if (tr.round[v] != 0)
            x[std::to_string(v)] = tr.x_sets[v];
    json hg = json::array();
    for (const Edge& e : tr.hg.edges())
        hg.push_back(e);
    return json{{"A", tr.a_sets}, {"X", x}, {"residue", tr.residue}, {"HG_edges", hg},
                {"elimination_order", tr.elimination_order}, {"degeneracy", tr.degeneracy}};
}

inline json tree_checks_json(const TreeColoringChecks& c)
{
    return json{{"residue_spans_no_edge", c.residue_spans_no_edge},
                {"degeneracy_within_bound", c.degeneracy_within_bound},
                {"palette_within_bound", c.palette_within_bound},
                {"proper_for_hg", c.proper_for_hg},
                {"proper_for_g", c.proper_for_g},
                {"witnesses_verified", c.witnesses_verified}};
}

inline json indnbd_json(const IndNbdReport& r)
{
    return json{{"k", r.k},
                {"degree_threshold", number(r.degree_threshold)},
                {"low_degree", r.low_degree},
                {"n_prime", r.n_prime},
                {"stage1_palette", r.stage1_palette},
                {"stage2_palette", r.stage2_palette},
                {"stage2_bound", r.stage2_bound},
                {"resamples", r.resamples},
                {"b_I", number(r.b_i)},
                {"premise_holds", r.premise_holds},
                {"vertex_bound_holds", r.vertex_bound_holds},
                {"within_k", r.within_k}};
}

inline json constants_json(const ConstantsTable& t)
{
    json rows = json::array();
    for (const auto& r : t.rows) {
        json row{{"name", r.name}, {"value", number(r.value)}};
        if (r.generic)
            row["generic"] = number(*r.generic);
        if (r.relative_difference)
            row["relative_difference"] = number(*r.relative_difference);
        if (!r.note.empty())
            row["note"] = r.note;
        rows.push_back(row);
    }
    return json{{"rows", rows}, {"tolerance", t.tolerance}, {"consistent", t.consistent}};
}

/// Fixed-width text table; rows with a generic counterpart show the
/// relative difference.
inline std::string constants_text(const ConstantsTable& t)
{
    std::ostringstream os;
    os.precision(12);
    char buf[256];
    std::snprintf(buf, sizeof buf, "%-10s %22s %22s %12s\n", "name", "closed_form", "generic", "rel_diff");
    os << buf;
    for (const auto& r : t.rows) {
        const std::string gen = r.generic ? (std::snprintf(buf, sizeof buf, "%.15g", *r.generic), std::string(buf)) : "-";
        const std::string rd
            = r.relative_difference ? (std::snprintf(buf, sizeof buf, "%.3e", *r.relative_difference), std::string(buf)) : "-";
        std::snprintf(buf, sizeof buf, "%-10s %22.15g %22s %12s", r.name.c_str(), r.value, gen.c_str(), rd.c_str());
        os << buf;
        if (!r.note.empty())
            os << "  # " << r.note;
        os << '\n';
    }
    os << "consistent " << (t.consistent ? "true" : "false") << " (tolerance " << t.tolerance << ")\n";
    return os.str();
}

/// The `invariants` report: rho, balance and the per-edge automorphism
/// table, always in this column order.
inline std::string invariants_text(const Hypergraph& h, const PatternCaps& caps = {})
{
    std::ostringstream os;
    os << "r " << h.rank() << "\nn " << h.num_vertices() << "\nm " << h.num_edges() << '\n';
    if (h.num_edges() >= 2) {
        const auto d = compute_rho(h, caps);
        os << "rho " << to_string(d.rho) << "\nbalanced " << (d.balanced ? "true" : "false") << "\nwitness";
        for (EdgeId id : d.witness)
            os << ' ' << id;
        os << '\n';
    } else {
        os << "rho -\nbalanced -\nwitness -\n";
    }
    if (h.num_edges() > 0) {
        const auto a = edge_automorphisms(h, caps);
        os << "aut_order " << a.aut_order << "\nalpha_min " << a.alpha_min << "\nedge\tvertices\talpha\torbit\n";
        for (EdgeId id = 0; id < h.num_edges(); ++id) {
            os << id << '\t';
            for (std::size_t j = 0; j < h.rank(); ++j)
                os << (j ? "," : "") << h.edge(id)[j];
            os << '\t' << a.alpha_per_edge[id] << '\t' << a.edge_orbit[id] << '\n';
        }
    }
    return os.str();
}

} // namespace hfree
