#pragma once

// Seeded trial runner behind `hfree experiment` and the single-shot
// subcommands. A config names one task; each trial gets one 64-bit seed and
// yields a TrialRecord (a CSV row) plus a JSON certificate.

#include "hfree/report.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace hfree {

inline constexpr std::string_view experiment_schema = "hfree-experiment/1";

inline const std::vector<std::string>& experiment_tasks()
{
    static const std::vector<std::string> tasks{"plan",        "construct-deletion", "construct-cliquefree",
                                                "color-lll",   "color-peel",         "color-indnbd",
                                                "color-tree",  "solve-chi",          "solve-alpha",
                                                "invariants",  "constants",          "check-free"};
    return tasks;
}

struct ExperimentConfig {
    std::string task;
    std::optional<std::string> family;
    std::optional<std::size_t> n;
    std::optional<std::size_t> r;
    /// Overrides for the deletion planner.
    std::optional<double> p;
    std::optional<double> t;
    std::optional<std::size_t> k;
    Rational alpha{1, 2};
    std::string extractor = "exact";
    std::optional<std::string> input;
    std::optional<std::string> pattern;
    std::optional<std::string> tree;
    /// Edge probability of generated hosts when no input file is given.
    std::optional<double> host_p;
    std::vector<std::uint64_t> seeds;
    VerifyLevel verify = VerifyLevel::Freeness;
    SolverBudget budget{};
    bool enforce_precondition = true;
    /// 0 = hardware concurrency.
    std::size_t threads = 1;
    std::optional<std::string> out_dir;
};

inline std::optional<VerifyLevel> parse_verify(std::string_view s)
{
    if (s == "none")
        return VerifyLevel::None;
    if (s == "freeness")
        return VerifyLevel::Freeness;
    if (s == "full")
        return VerifyLevel::Full;
    return std::nullopt;
}

constexpr std::string_view to_string(VerifyLevel v) noexcept
{
    switch (v) {
    case VerifyLevel::None: return "none";
    case VerifyLevel::Freeness: return "freeness";
    case VerifyLevel::Full: return "full";
    }
    return "none";
}

/// "p/q" or an integer.
inline Rational parse_rational(const std::string& s)
{
    const auto slash = s.find('/');
    try {
        std::size_t used = 0;
        const long long num = std::stoll(s.substr(0, slash), &used);
        if (used != (slash == std::string::npos ? s.size() : slash))
            throw std::invalid_argument(s);
        long long den = 1;
        if (slash != std::string::npos) {
            den = std::stoll(s.substr(slash + 1), &used);
            if (used != s.size() - slash - 1 || den == 0)
                throw std::invalid_argument(s);
        }
        return Rational(num, den);
    } catch (const std::logic_error&) {
        throw Error(Errc::Config, "not a rational number: '" + s + "'");
    }
}

namespace detail {

inline Error config_error(const std::string& what) { return Error(Errc::Config, what); }

template <typename T>
T get_as(const json& j, const std::string& key)
{
    const json& v = j.at(key);
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean())
            throw config_error("'" + key + "' must be a boolean");
        return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
        if (!v.is_string())
            throw config_error("'" + key + "' must be a string");
        return v.get<std::string>();
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number())
            throw config_error("'" + key + "' must be a number");
        return v.get<T>();
    } else {
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
            throw config_error("'" + key + "' must be a non-negative integer");
        return v.get<T>();
    }
}

} // namespace detail

/// Validates everything up front; unknown keys and missing task parameters
/// are Config errors. Nothing is read from disk here.
inline ExperimentConfig parse_config(const json& j)
{
    using detail::config_error;
    using detail::get_as;
    static const std::set<std::string> known{
        "task",     "family",         "n",           "r",       "p",     "t",          "k",
        "alpha",    "extractor",      "input",       "pattern", "tree",  "host_p",     "seeds",
        "base_seed", "trials",        "verify",      "budget_nodes", "budget_time_ms", "budget_resamples",
        "enforce_precondition", "threads", "out_dir"};
    if (!j.is_object())
        throw config_error("config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!known.count(key))
            throw config_error("unknown config key '" + key + "'");
    if (!j.contains("task"))
        throw config_error("missing 'task'");

    ExperimentConfig c;
    c.task = get_as<std::string>(j, "task");
    const auto& tasks = experiment_tasks();
    if (std::find(tasks.begin(), tasks.end(), c.task) == tasks.end())
        throw config_error("unknown task '" + c.task + "'");

    auto opt_str = [&](const char* key, std::optional<std::string>& out) {
        if (j.contains(key))
            out = get_as<std::string>(j, key);
    };
    auto opt_size = [&](const char* key, std::optional<std::size_t>& out) {
        if (j.contains(key))
            out = get_as<std::size_t>(j, key);
    };
    auto opt_real = [&](const char* key, std::optional<double>& out) {
        if (j.contains(key))
            out = get_as<double>(j, key);
    };
    opt_str("family", c.family);
    opt_size("n", c.n);
    opt_size("r", c.r);
    opt_real("p", c.p);
    opt_real("t", c.t);
    opt_size("k", c.k);
    opt_str("input", c.input);
    opt_str("pattern", c.pattern);
    opt_str("tree", c.tree);
    opt_real("host_p", c.host_p);
    opt_str("out_dir", c.out_dir);
    if (j.contains("alpha"))
        c.alpha = parse_rational(get_as<std::string>(j, "alpha"));
    if (j.contains("extractor"))
        c.extractor = get_as<std::string>(j, "extractor");
    if (j.contains("verify")) {
        const auto v = parse_verify(get_as<std::string>(j, "verify"));
        if (!v)
            throw config_error("'verify' must be none, freeness or full");
        c.verify = *v;
    }
    if (j.contains("budget_nodes"))
        c.budget.max_nodes = get_as<std::uint64_t>(j, "budget_nodes");
    if (j.contains("budget_time_ms"))
        c.budget.max_time = std::chrono::milliseconds(get_as<std::uint64_t>(j, "budget_time_ms"));
    if (j.contains("budget_resamples"))
        c.budget.max_resamples = get_as<std::uint64_t>(j, "budget_resamples");
    if (j.contains("enforce_precondition"))
        c.enforce_precondition = get_as<bool>(j, "enforce_precondition");
    if (j.contains("threads"))
        c.threads = get_as<std::size_t>(j, "threads");

    if (j.contains("seeds")) {
        if (j.contains("base_seed") || j.contains("trials"))
            throw config_error("give either 'seeds' or 'base_seed'/'trials', not both");
        if (!j["seeds"].is_array())
            throw config_error("'seeds' must be an array");
        for (const auto& s : j["seeds"]) {
            if (!s.is_number_integer() || (!s.is_number_unsigned() && s.get<std::int64_t>() < 0))
                throw config_error("'seeds' entries must be non-negative integers");
            c.seeds.push_back(s.get<std::uint64_t>());
        }
    } else {
        const std::uint64_t base = j.contains("base_seed") ? get_as<std::uint64_t>(j, "base_seed") : 0;
        const std::size_t trials = j.contains("trials") ? get_as<std::size_t>(j, "trials") : 1;
        for (std::size_t i = 0; i < trials; ++i)
            c.seeds.push_back(derive_seed(base, i));
    }

    // per-task requirements
    auto need = [&](bool ok, const std::string& what) {
        if (!ok)
            throw config_error("task '" + c.task + "' needs " + what);
    };
    const bool host_task = c.task.starts_with("color-") || c.task.starts_with("solve-") || c.task == "check-free";
    if (host_task && !c.input) {
        need(c.n.has_value() && c.host_p.has_value(), "'input' or a generated host ('n', 'host_p', 'r')");
        need(c.r.has_value() || (c.task == "color-tree" && c.tree) || (c.task == "check-free" && c.pattern),
             "'r' for the generated host");
        need(*c.host_p >= 0 && *c.host_p <= 1, "'host_p' in [0, 1]");
    }
    if (c.task == "plan" || c.task == "construct-deletion")
        need(c.family && c.n, "'family' and 'n'");
    if (c.task == "construct-cliquefree")
        need(c.n && c.r, "'n' and 'r'");
    if (c.task == "color-lll" || c.task == "color-indnbd")
        need(c.k.has_value(), "'k'");
    if (c.task == "color-peel") {
        need(c.extractor == "exact" || c.extractor == "greedy" || c.extractor == "turan",
             "'extractor' in {exact, greedy, turan}");
        need(c.alpha > Rational(0) && c.alpha <= Rational(1, 2), "'alpha' in (0, 1/2]");
    }
    if (c.task == "color-tree")
        need(c.tree.has_value(), "'tree'");
    if (c.task == "check-free")
        need(c.pattern.has_value(), "'pattern'");
    if (c.task == "invariants")
        need(c.pattern || c.input, "'pattern' or 'input'");
    if (c.task == "constants")
        need(c.family && (c.family->starts_with("rl:") || c.family->starts_with("fr:")), "'family' as rl:R:L or fr:R");
    return c;
}

inline ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(Errc::Io, "cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(Errc::Config, path + ": " + e.what());
    }
    return parse_config(j);
}

// ---------------------------------------------------------------------------
// Records

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    std::string task;
    std::optional<std::size_t> n;
    std::optional<std::size_t> r;
    std::string family;
    std::optional<std::size_t> edges_sampled;
    std::optional<std::size_t> edges_final;
    std::optional<std::size_t> removed_edges;
    std::optional<std::size_t> alpha;
    std::optional<bool> alpha_exact;
    std::optional<std::size_t> chi;
    std::optional<std::size_t> palette;
    std::optional<std::size_t> palette_bound;
    std::optional<bool> free;
    std::optional<bool> proper;
    bool passed = false;
    double runtime_ms = 0;
    /// Relative to the output directory.
    std::string certificate;
    std::string failure;

    /// Runtimes never take part in comparisons.
    friend bool operator==(const TrialRecord& a, const TrialRecord& b)
    {
        auto key = [](const TrialRecord& x) {
            return std::tie(x.trial, x.seed, x.task, x.n, x.r, x.family, x.edges_sampled, x.edges_final,
                            x.removed_edges, x.alpha, x.alpha_exact, x.chi, x.palette, x.palette_bound, x.free,
                            x.proper, x.passed, x.certificate, x.failure);
        };
        return key(a) == key(b);
    }
};

inline const std::vector<std::string>& csv_header()
{
    static const std::vector<std::string> h{"trial",        "seed",          "task",          "n",
                                            "r",            "family",        "edges_sampled", "edges_final",
                                            "removed_edges", "alpha",        "alpha_exact",   "chi",
                                            "palette",      "palette_bound", "free",          "proper",
                                            "passed",       "runtime_ms",    "certificate",   "failure"};
    return h;
}

namespace detail {

inline std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"')
            out += '"';
        out += ch;
    }
    return out + '"';
}

template <typename T>
std::string cell(const std::optional<T>& v)
{
    if (!v)
        return {};
    if constexpr (std::is_same_v<T, bool>)
        return *v ? "true" : "false";
    else
        return std::to_string(*v);
}

inline std::string format_ms(double ms)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    return buf;
}

/// RFC 4180 rows; quoted fields may span lines.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
            any = true;
        } else if (ch == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n')
                ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += ch;
            any = true;
        }
    }
    if (quoted)
        throw Error(Errc::MalformedHeader, "unterminated quoted CSV field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::uint64_t parse_u64(const std::string& s)
{
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error(Errc::InvalidArgument, "not an unsigned integer in CSV: '" + s + "'");
    return v;
}

inline std::optional<std::size_t> opt_size(const std::string& s)
{
    if (s.empty())
        return std::nullopt;
    return static_cast<std::size_t>(parse_u64(s));
}

inline std::optional<bool> opt_bool(const std::string& s)
{
    if (s.empty())
        return std::nullopt;
    if (s == "true")
        return true;
    if (s == "false")
        return false;
    throw Error(Errc::InvalidArgument, "not a boolean in CSV: '" + s + "'");
}

} // namespace detail

inline std::string to_csv(const std::vector<TrialRecord>& records)
{
    using detail::cell;
    using detail::csv_quote;
    std::string out;
    const auto& h = csv_header();
    for (std::size_t i = 0; i < h.size(); ++i)
        out += (i ? "," : "") + h[i];
    out += '\n';
    for (const auto& x : records) {
        const std::vector<std::string> row{std::to_string(x.trial),
                                           std::to_string(x.seed),
                                           csv_quote(x.task),
                                           cell(x.n),
                                           cell(x.r),
                                           csv_quote(x.family),
                                           cell(x.edges_sampled),
                                           cell(x.edges_final),
                                           cell(x.removed_edges),
                                           cell(x.alpha),
                                           cell(x.alpha_exact),
                                           cell(x.chi),
                                           cell(x.palette),
                                           cell(x.palette_bound),
                                           cell(x.free),
                                           cell(x.proper),
                                           x.passed ? "true" : "false",
                                           detail::format_ms(x.runtime_ms),
                                           csv_quote(x.certificate),
                                           csv_quote(x.failure)};
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i ? "," : "") + row[i];
        out += '\n';
    }
    return out;
}

inline std::vector<TrialRecord> from_csv(std::string_view text)
{
    const auto rows = detail::parse_csv(text);
    if (rows.empty() || rows[0] != csv_header())
        throw Error(Errc::MalformedHeader, "CSV header does not match the trial schema");
    std::vector<TrialRecord> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& c = rows[i];
        if (c.size() != csv_header().size())
            throw Error(Errc::WrongArity, "CSV row has " + std::to_string(c.size()) + " fields", i + 1);
        TrialRecord x;
        x.trial = static_cast<std::size_t>(detail::parse_u64(c[0]));
        x.seed = detail::parse_u64(c[1]);
        x.task = c[2];
        x.n = detail::opt_size(c[3]);
        x.r = detail::opt_size(c[4]);
        x.family = c[5];
        x.edges_sampled = detail::opt_size(c[6]);
        x.edges_final = detail::opt_size(c[7]);
        x.removed_edges = detail::opt_size(c[8]);
        x.alpha = detail::opt_size(c[9]);
        x.alpha_exact = detail::opt_bool(c[10]);
        x.chi = detail::opt_size(c[11]);
        x.palette = detail::opt_size(c[12]);
        x.palette_bound = detail::opt_size(c[13]);
        x.free = detail::opt_bool(c[14]);
        x.proper = detail::opt_bool(c[15]);
        x.passed = detail::opt_bool(c[16]).value_or(false);
        x.runtime_ms = c[17].empty() ? 0.0 : std::stod(c[17]);
        x.certificate = c[18];
        x.failure = c[19];
        out.push_back(std::move(x));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Trials

/// Inputs shared read-only by every trial of one experiment.
struct ExperimentContext {
    ExperimentConfig config;
    std::optional<Hypergraph> input;
    std::optional<Hypergraph> pattern;
    std::optional<Hypergraph> tree;
    std::vector<Hypergraph> family;
};

inline ExperimentContext prepare_experiment(const ExperimentConfig& cfg)
{
    ExperimentContext ctx{cfg, {}, {}, {}, {}};
    if (cfg.input)
        ctx.input = read_hypergraph(*cfg.input);
    if (cfg.pattern)
        ctx.pattern = pattern_from_spec(*cfg.pattern);
    if (cfg.tree) {
        ctx.tree = pattern_from_spec(*cfg.tree);
        if (!is_r_tree(*ctx.tree))
            throw Error(Errc::InvalidArgument, "'" + *cfg.tree + "' is not an r-tree");
    }
    if (cfg.family && (cfg.task == "plan" || cfg.task == "construct-deletion"))
        ctx.family = family_from_spec(*cfg.family);
    return ctx;
}

struct TrialOutcome {
    TrialRecord record;
    json certificate;
    /// Constructed hypergraph, for the construct tasks.
    std::optional<Hypergraph> graph;
    /// Set when the trial stopped on a library error.
    std::optional<Errc> error;
};

namespace detail {

/// Input host, or G(n, r, host_p) from the trial seed. When `avoid` is
/// given a maximal packing of its copies is deleted, so the host is free
/// of it.
inline Hypergraph trial_host(const ExperimentContext& ctx, std::uint64_t seed, std::size_t r,
                             const Hypergraph* avoid = nullptr)
{
    if (ctx.input)
        return *ctx.input;
    const auto& c = ctx.config;
    Hypergraph g = sample_random_hypergraph(*c.n, r, *c.host_p, derive_seed(seed, streams::sample));
    if (avoid) {
        const auto pk = max_edge_disjoint_packing(g, *avoid, derive_seed(seed, streams::packing));
        g = remove_edges(g, pk.edge_set());
    }
    return g;
}

inline std::size_t host_rank(const ExperimentContext& ctx)
{
    if (ctx.input)
        return ctx.input->rank();
    if (ctx.config.r)
        return *ctx.config.r;
    if (ctx.tree)
        return ctx.tree->rank();
    if (ctx.pattern)
        return ctx.pattern->rank();
    throw Error(Errc::Config, "no uniformity given for the generated host");
}

inline Extractor make_extractor(const std::string& name, std::uint64_t seed, const SolverBudget& budget)
{
    if (name == "greedy")
        return [](const Hypergraph& sub) { return greedy_independent_set(sub); };
    if (name == "turan")
        return [seed, budget](const Hypergraph& sub) {
            TuranOptions o;
            o.budget = budget;
            return turan_independent_set(sub, derive_seed(seed, streams::turan), o).set.vertices;
        };
    return [budget](const Hypergraph& sub) {
        auto res = independence_number(sub, budget);
        if (!res.exact)
            throw Error(Errc::BudgetExceeded, "exact extractor ran out of budget");
        return res.witness.vertices;
    };
}

inline void fill_host(TrialRecord& rec, const Hypergraph& g)
{
    rec.n = g.num_vertices();
    rec.r = g.rank();
    rec.edges_final = g.num_edges();
}

inline void run_task(const ExperimentContext& ctx, TrialOutcome& out)
{
    const auto& c = ctx.config;
    TrialRecord& rec = out.record;
    const std::uint64_t seed = rec.seed;
    json& cert = out.certificate;

    if (c.task == "plan" || c.task == "construct-deletion") {
        PlanOverrides ov{c.p, c.t};
        const auto plan = plan_construction(ctx.family, *c.n, ov);
        rec.n = plan.n;
        rec.r = plan.r;
        rec.family = *c.family;
        if (c.task == "plan") {
            cert = plan_json(plan);
            rec.passed = plan.feasible;
            if (!plan.feasible)
                rec.failure = "plan infeasible";
            return;
        }
        DeletionOptions opts;
        opts.budget = c.budget;
        const auto res = deletion_construct(plan, seed, c.verify, opts);
        rec.edges_sampled = res.sampled.num_edges();
        rec.edges_final = res.final.num_edges();
        rec.removed_edges = res.removed_edges;
        if (res.alpha.computed && res.alpha.exact)
            rec.alpha = res.alpha.value;
        if (res.alpha.computed)
            rec.alpha_exact = res.alpha.exact;
        if (res.freeness_checked)
            rec.free = std::all_of(res.member_free.begin(), res.member_free.end(), [](bool b) { return b; });
        rec.passed = rec.free.value_or(true);
        if (!rec.passed)
            rec.failure = "final hypergraph contains a family member";
        cert = deletion_json(res);
        cert["plan"] = plan_json(plan);
        out.graph = res.final;
        return;
    }

    if (c.task == "construct-cliquefree") {
        auto res = clique_free_construct(*c.n, *c.r, seed);
        fill_host(rec, res.graph);
        rec.family = "clique:" + std::to_string(*c.r) + ":" + std::to_string(*c.r + 1);
        std::optional<bool> free;
        if (c.verify != VerifyLevel::None)
            free = !contains_copy(res.graph, gen_clique(*c.r, *c.r + 1)).has_value();
        rec.free = free;
        cert = clique_free_json(res, free);
        rec.passed = free.value_or(true) && cert["edge_bound_holds"].get<bool>() && cert["partitions_ok"].get<bool>();
        if (!rec.passed)
            rec.failure = "clique-free assertions failed";
        out.graph = std::move(res.graph);
        return;
    }

    if (c.task == "color-lll") {
        const Hypergraph g = trial_host(ctx, seed, host_rank(ctx));
        fill_host(rec, g);
        rec.palette_bound = *c.k;
        const auto res = lll_coloring(g, *c.k, derive_seed(seed, streams::lll), c.budget, c.enforce_precondition);
        rec.palette = res.coloring.palette_size;
        rec.proper = is_proper(g, res.coloring);
        rec.passed = *rec.proper;
        cert = coloring_certificate(g, res.coloring);
        cert["resamples"] = res.resamples;
        cert["degree_condition"] = lll_degree_condition(g, *c.k);
        if (!res.proper) {
            rec.failure = "BudgetExceeded: resample cap reached";
            out.error = Errc::BudgetExceeded;
        }
        return;
    }

    if (c.task == "color-peel") {
        const Hypergraph g = trial_host(ctx, seed, host_rank(ctx));
        fill_host(rec, g);
        rec.palette_bound = peeling_palette_bound(g.num_vertices(), c.alpha);
        const auto col = recursive_coloring(g, make_extractor(c.extractor, seed, c.budget), c.alpha);
        rec.palette = col.palette_size;
        rec.proper = is_proper(g, col);
        rec.passed = *rec.proper && col.palette_size <= *rec.palette_bound;
        cert = coloring_certificate(g, col);
        cert["alpha"] = to_string(c.alpha);
        cert["extractor"] = c.extractor;
        cert["palette_bound"] = *rec.palette_bound;
        if (!rec.passed)
            rec.failure = "peeling palette exceeded its bound";
        return;
    }

    if (c.task == "color-indnbd") {
        const std::size_t r = host_rank(ctx);
        const Hypergraph fan = gen_Fr(r);
        const Hypergraph g = trial_host(ctx, seed, r, &fan);
        fill_host(rec, g);
        const auto res = indnbd_coloring(g, *c.k, derive_seed(seed, streams::lll), c.budget);
        const auto& rep = res.report;
        rec.palette = res.coloring.palette_size;
        rec.palette_bound = *c.k / 2 + rep.stage2_bound;
        rec.proper = is_proper(g, res.coloring);
        rec.passed = *rec.proper && rep.stage1_palette <= *c.k / 2 && rep.stage2_palette <= rep.stage2_bound;
        cert = coloring_certificate(g, res.coloring);
        cert["report"] = indnbd_json(rep);
        if (!rec.passed)
            rec.failure = "two-stage coloring assertions failed";
        return;
    }

    if (c.task == "color-tree") {
        const Hypergraph& t = *ctx.tree;
        const Hypergraph g = trial_host(ctx, seed, t.rank(), &t);
        fill_host(rec, g);
        rec.family = *c.tree;
        const auto res = tree_free_coloring(g, t);
        rec.palette_bound = res.palette_bound;
        rec.free = !res.contains_tree.has_value();
        if (res.contains_tree) {
            rec.passed = false;
            rec.failure = "host contains the tree";
            cert = json{{"schema", certificate_schema}, {"kind", "tree_copy"}, {"graph", graph_summary(g)},
                        {"embedding", res.contains_tree->embedding}, {"edges", res.contains_tree->edges}};
            return;
        }
        rec.palette = res.coloring.palette_size;
        rec.proper = is_proper(g, res.coloring);
        rec.passed = res.checks.all();
        cert = coloring_certificate(g, res.coloring);
        cert["palette_bound"] = res.palette_bound;
        cert["checks"] = tree_checks_json(res.checks);
        cert["trace"] = tree_trace_json(res);
        if (!rec.passed)
            rec.failure = "tree coloring assertions failed";
        return;
    }

    if (c.task == "solve-chi" || c.task == "solve-alpha") {
        const Hypergraph g = trial_host(ctx, seed, host_rank(ctx));
        fill_host(rec, g);
        bool exact = false;
        if (c.task == "solve-chi") {
            const auto res = weak_chromatic_number(g, c.budget);
            exact = res.exact;
            rec.chi = res.chi;
            rec.proper = is_proper(g, res.coloring);
            cert = coloring_certificate(g, res.coloring);
            cert["chi"] = res.chi;
            cert["lower_bound"] = res.lower_bound;
            cert["exact"] = res.exact;
            rec.passed = exact && *rec.proper;
        } else {
            const auto res = independence_number(g, c.budget);
            exact = res.exact;
            rec.alpha = res.alpha;
            rec.alpha_exact = res.exact;
            cert = independent_set_certificate(g, res.witness);
            cert["alpha"] = res.alpha;
            cert["upper_bound"] = res.upper_bound;
            cert["exact"] = res.exact;
            rec.passed = exact && is_independent(g, res.witness.vertices);
        }
        if (!exact) {
            rec.failure = "BudgetExceeded: search stopped before optimality was proven";
            out.error = Errc::BudgetExceeded;
        }
        return;
    }

    if (c.task == "invariants") {
        const Hypergraph& h = ctx.pattern ? *ctx.pattern : *ctx.input;
        rec.n = h.num_vertices();
        rec.r = h.rank();
        rec.edges_final = h.num_edges();
        rec.family = c.pattern.value_or("");
        cert = json{{"schema", certificate_schema}, {"kind", "invariants"}, {"graph", graph_summary(h)}};
        if (h.num_edges() >= 2)
            cert["density"] = density_json(compute_rho(h));
        if (h.num_edges() > 0) {
            const auto a = edge_automorphisms(h);
            cert["aut_order"] = a.aut_order;
            cert["alpha_min"] = a.alpha_min;
            cert["alpha_per_edge"] = a.alpha_per_edge;
            cert["edge_orbit"] = a.edge_orbit;
        }
        rec.passed = true;
        return;
    }

    if (c.task == "constants") {
        const auto nums = spec_numbers(*c.family, 3);
        ConstantsSpec spec;
        if (c.family->starts_with("rl:")) {
            if (nums.size() != 2)
                throw Error(Errc::Config, "constants family must be rl:R:L");
            spec = ConstantsSpec{ConstantsSpec::Kind::RL, nums[0], nums[1]};
        } else {
            if (nums.size() != 1)
                throw Error(Errc::Config, "constants family must be fr:R");
            spec = ConstantsSpec{ConstantsSpec::Kind::FR, nums[0], 0};
        }
        const auto table = closed_form_constants(spec);
        rec.r = spec.r;
        rec.family = *c.family;
        cert = constants_json(table);
        rec.passed = table.consistent;
        if (!rec.passed)
            rec.failure = "closed forms disagree with the generic pipeline";
        return;
    }

    if (c.task == "check-free") {
        const Hypergraph& h = *ctx.pattern;
        const Hypergraph g = trial_host(ctx, seed, host_rank(ctx));
        fill_host(rec, g);
        rec.family = *c.pattern;
        const auto copy = contains_copy(g, h);
        rec.free = !copy.has_value();
        rec.passed = *rec.free;
        cert = json{{"schema", certificate_schema}, {"kind", "freeness"}, {"graph", graph_summary(g)},
                    {"free", *rec.free}};
        if (copy) {
            cert["embedding"] = copy->embedding;
            cert["edges"] = copy->edges;
            rec.failure = "host contains the pattern";
        }
        return;
    }
    throw Error(Errc::Config, "unknown task '" + c.task + "'");
}

} // namespace detail

/// Runs one trial. Library errors are recorded on the trial, never thrown.
inline TrialOutcome run_trial(const ExperimentContext& ctx, std::size_t index, std::uint64_t seed)
{
    TrialOutcome out;
    out.record.trial = index;
    out.record.seed = seed;
    out.record.task = ctx.config.task;
    const auto start = std::chrono::steady_clock::now();
    try {
        detail::run_task(ctx, out);
    } catch (const Error& e) {
        out.record.passed = false;
        out.record.failure = e.what();
        out.error = e.code();
        out.certificate = json{{"schema", certificate_schema}, {"kind", "error"},
                               {"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    }
    out.record.runtime_ms
        = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return out;
}

struct ExperimentResult {
    std::vector<TrialRecord> records;
    json aggregate;
    bool all_passed = true;

    int exit_code() const { return all_passed ? 0 : 1; }
};

inline json aggregate_records(const ExperimentConfig& cfg, const std::vector<TrialRecord>& records)
{
    json fields = json::object();
    auto stat = [&](const char* name, auto get) {
        std::size_t count = 0;
        double lo = 0, hi = 0, sum = 0;
        for (const auto& x : records) {
            const std::optional<double> v = get(x);
            if (!v)
                continue;
            lo = count ? std::min(lo, *v) : *v;
            hi = count ? std::max(hi, *v) : *v;
            sum += *v;
            ++count;
        }
        json s{{"count", count}};
        if (count)
            s.update(json{{"min", lo}, {"mean", sum / static_cast<double>(count)}, {"max", hi}});
        fields[name] = s;
    };
    auto of = [](const std::optional<std::size_t>& v) -> std::optional<double> {
        return v ? std::optional<double>(static_cast<double>(*v)) : std::nullopt;
    };
    stat("n", [&](const TrialRecord& x) { return of(x.n); });
    stat("edges_sampled", [&](const TrialRecord& x) { return of(x.edges_sampled); });
    stat("edges_final", [&](const TrialRecord& x) { return of(x.edges_final); });
    stat("removed_edges", [&](const TrialRecord& x) { return of(x.removed_edges); });
    stat("alpha", [&](const TrialRecord& x) { return of(x.alpha); });
    stat("chi", [&](const TrialRecord& x) { return of(x.chi); });
    stat("palette", [&](const TrialRecord& x) { return of(x.palette); });
    stat("palette_bound", [&](const TrialRecord& x) { return of(x.palette_bound); });
    stat("runtime_ms", [](const TrialRecord& x) { return std::optional<double>(x.runtime_ms); });

    std::size_t passed = 0, free_known = 0, free_count = 0;
    json failing = json::array();
    for (const auto& x : records) {
        passed += x.passed;
        if (!x.passed)
            failing.push_back(x.seed);
        if (x.free) {
            ++free_known;
            free_count += *x.free;
        }
    }
    const auto rate = [](std::size_t a, std::size_t b) -> json {
        return b ? json(static_cast<double>(a) / static_cast<double>(b)) : json(nullptr);
    };
    return json{{"schema", experiment_schema},
                {"task", cfg.task},
                {"trials", records.size()},
                {"passed", passed},
                {"pass_rate", rate(passed, records.size())},
                {"free_rate", rate(free_count, free_known)},
                {"failing_seeds", failing},
                {"fields", fields}};
}

inline void write_json_file(const std::filesystem::path& path, const json& j)
{
    write_text(path.string(), j.dump(2) + "\n");
}

/// Trials run on a small pool; each worker claims the next index and the
/// outcome is stored in that index's slot, so output order never depends on
/// scheduling. Certificates go to <out_dir>/certs/trial_<i>.json.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg)
{
    const ExperimentContext ctx = prepare_experiment(cfg);
    const std::size_t total = cfg.seeds.size();
    std::filesystem::path certs;
    if (cfg.out_dir) {
        certs = std::filesystem::path(*cfg.out_dir) / "certs";
        std::error_code ec;
        std::filesystem::create_directories(certs, ec);
        if (ec)
            throw Error(Errc::Io, "cannot create " + certs.string() + ": " + ec.message());
    }

    std::vector<TrialRecord> records(total);
    std::atomic<std::size_t> next{0};
    std::mutex io_error_mutex;
    std::optional<Error> io_error;
    auto worker = [&] {
        for (std::size_t i = next++; i < total; i = next++) {
            TrialOutcome out = run_trial(ctx, i, cfg.seeds[i]);
            if (cfg.out_dir) {
                const std::string rel = "certs/trial_" + std::to_string(i) + ".json";
                out.record.certificate = rel;
                try {
                    write_json_file(std::filesystem::path(*cfg.out_dir) / rel, out.certificate);
                } catch (const Error& e) {
                    std::lock_guard lock(io_error_mutex);
                    if (!io_error)
                        io_error = e;
                }
            }
            records[i] = std::move(out.record);
        }
    };
    std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, std::max<std::size_t>(total, 1));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < threads; ++i)
            pool.emplace_back(worker);
    }
    if (io_error)
        throw *io_error;

    ExperimentResult res;
    res.all_passed = std::all_of(records.begin(), records.end(), [](const TrialRecord& x) { return x.passed; });
    res.aggregate = aggregate_records(cfg, records);
    res.records = std::move(records);
    if (cfg.out_dir) {
        write_text((std::filesystem::path(*cfg.out_dir) / "trials.csv").string(), to_csv(res.records));
        write_json_file(std::filesystem::path(*cfg.out_dir) / "summary.json", res.aggregate);
    }
    return res;
}

} // namespace hfree
