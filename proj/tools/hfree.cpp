// hfree command-line front end.
//
// Exit codes: 0 ok, 1 an assertion failed (or the host is not free),
// 2 usage or input error, 3 a search budget ran out.

#include "hfree/experiment.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

using namespace hfree;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_usage = 2;
constexpr int exit_budget = 3;

int exit_for(Errc code)
{
    switch (code) {
    case Errc::BudgetExceeded: return exit_budget;
    case Errc::PreconditionFailed:
    case Errc::ExtractorContractViolation:
    case Errc::NotIndependentNeighborhoods: return exit_failed;
    default: return exit_usage;
    }
}

/// Options shared by every subcommand that runs a single trial.
struct Common {
    std::uint64_t seed = 0;
    std::uint64_t budget_nodes = SolverBudget{}.max_nodes;
    std::uint64_t budget_ms = 0;
    std::uint64_t budget_resamples = SolverBudget{}.max_resamples;
    std::string out;
};

void add_budget(CLI::App* cmd, Common& c)
{
    cmd->add_option("--budget-nodes", c.budget_nodes, "search node cap");
    cmd->add_option("--budget-ms", c.budget_ms, "wall-clock cap in ms (0 = none)");
    cmd->add_option("--budget-resamples", c.budget_resamples, "resampling cap");
}

json base_config(const std::string& task, const Common& c)
{
    return json{{"task", task},
                {"seeds", json::array({c.seed})},
                {"budget_nodes", c.budget_nodes},
                {"budget_time_ms", c.budget_ms},
                {"budget_resamples", c.budget_resamples}};
}

void emit(const json& cert, const std::string& out)
{
    if (out.empty())
        std::cout << cert.dump(2) << '\n';
    else
        write_text(out, cert.dump(2) + "\n");
}

/// Runs one trial of `task` and maps its outcome to an exit code.
int run_single(const json& cfg_json, const std::string& out, const std::function<void(TrialOutcome&)>& show = {})
{
    const auto cfg = parse_config(cfg_json);
    const auto ctx = prepare_experiment(cfg);
    TrialOutcome res = run_trial(ctx, 0, cfg.seeds.at(0));
    if (show && !res.error)
        show(res);
    emit(res.certificate, out);
    if (res.error) {
        std::cerr << "hfree: " << res.record.failure << '\n';
        return exit_for(*res.error);
    }
    if (!res.record.passed) {
        std::cerr << "hfree: " << res.record.failure << '\n';
        return exit_failed;
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Coloring and constructions for H-free hypergraphs"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "hfree 1.0");
    Common common;
    int code = exit_ok;

    // invariants
    std::string inv_file;
    auto* inv = app.add_subcommand("invariants", "density, balance and per-edge automorphism counts");
    inv->add_option("file", inv_file, "hypergraph file or pattern spec")->required();
    inv->callback([&] { std::cout << invariants_text(pattern_from_spec(inv_file)); });

    // check-free
    std::string cf_file, cf_pattern;
    auto* cf = app.add_subcommand("check-free", "exit 0 if the host has no copy of the pattern, 1 with a witness");
    cf->add_option("file", cf_file, "host hypergraph file")->required()->check(CLI::ExistingFile);
    cf->add_option("--pattern", cf_pattern, "pattern file or fr:R | clique:R:T | overlap:R:M | path:R:T | star:R:T")
        ->required();
    cf->callback([&] {
        const Hypergraph g = read_hypergraph(cf_file);
        const Hypergraph h = pattern_from_spec(cf_pattern);
        const auto copy = contains_copy(g, h);
        if (!copy) {
            std::cout << "free\n";
            return;
        }
        std::cout << "contains\nedges";
        for (EdgeId id : copy->edges) {
            std::cout << ' ';
            for (std::size_t j = 0; j < g.rank(); ++j)
                std::cout << (j ? "," : "") << g.edge(id)[j];
        }
        std::cout << "\nembedding";
        for (Vertex v : copy->embedding)
            std::cout << ' ' << (v == unmapped ? std::string("-") : std::to_string(v));
        std::cout << '\n';
        code = exit_failed;
    });

    // solve
    std::string solve_what, solve_file;
    auto* solve = app.add_subcommand("solve", "exact chromatic or independence number");
    solve->add_option("problem", solve_what, "chi | alpha")->required()->check(CLI::IsMember({"chi", "alpha"}));
    solve->add_option("file", solve_file, "hypergraph file")->required()->check(CLI::ExistingFile);
    add_budget(solve, common);
    solve->add_option("--out", common.out, "certificate path (default stdout)");
    solve->callback([&] {
        json cfg = base_config("solve-" + solve_what, common);
        cfg["input"] = solve_file;
        code = run_single(cfg, common.out, [&](TrialOutcome& res) {
            if (common.out.empty())
                return;
            if (res.record.chi)
                std::cout << "chi " << *res.record.chi << '\n';
            if (res.record.alpha)
                std::cout << "alpha " << *res.record.alpha << '\n';
        });
    });

    // color
    std::string color_how, color_file, color_alpha = "1/2", color_extractor = "exact", color_tree;
    std::size_t color_k = 0;
    bool color_trace = false, color_no_enforce = false;
    auto* color = app.add_subcommand("color", "color a hypergraph and emit a checked certificate");
    color->add_option("method", color_how, "lll | peel | indnbd | tree")
        ->required()
        ->check(CLI::IsMember({"lll", "peel", "indnbd", "tree"}));
    color->add_option("file", color_file, "host hypergraph file")->required()->check(CLI::ExistingFile);
    color->add_option("--k", color_k, "palette size (lll, indnbd)");
    color->add_option("--seed", common.seed, "trial seed");
    color->add_option("--alpha", color_alpha, "peeling exponent p/q in (0, 1/2]");
    color->add_option("--extractor", color_extractor, "exact | greedy | turan")
        ->check(CLI::IsMember({"exact", "greedy", "turan"}));
    color->add_option("--tree", color_tree, "tree file or path:R:T | star:R:T (tree)");
    color->add_flag("--trace", color_trace, "include the A/X/H_G trace (tree)");
    color->add_flag("--no-enforce-precondition", color_no_enforce, "run lll even when the degree condition fails");
    add_budget(color, common);
    color->add_option("--out", common.out, "certificate path (default stdout)");
    color->callback([&] {
        json cfg = base_config("color-" + color_how, common);
        cfg["input"] = color_file;
        if (color->count("--k"))
            cfg["k"] = color_k;
        cfg["alpha"] = color_alpha;
        cfg["extractor"] = color_extractor;
        cfg["enforce_precondition"] = !color_no_enforce;
        if (!color_tree.empty())
            cfg["tree"] = color_tree;
        code = run_single(cfg, common.out, [&](TrialOutcome& res) {
            if (!color_trace)
                res.certificate.erase("trace");
            if (!common.out.empty() && res.record.palette)
                std::cout << "palette " << *res.record.palette << " bound "
                          << (res.record.palette_bound ? std::to_string(*res.record.palette_bound) : "-")
                          << " proper " << (res.record.proper.value_or(false) ? "true" : "false") << '\n';
        });
    });

    // plan
    std::string plan_family;
    std::size_t plan_n = 0;
    double plan_p = 0, plan_t = 0;
    auto* plan = app.add_subcommand("plan", "constants of the deletion construction as JSON");
    plan->add_option("--family", plan_family, "rl:R:L or comma-separated pattern specs")->required();
    plan->add_option("--n", plan_n, "host size")->required();
    plan->add_option("--p", plan_p, "override the edge probability");
    plan->add_option("--t", plan_t, "override the independence target");
    plan->callback([&] {
        PlanOverrides ov;
        if (plan->count("--p"))
            ov.p = plan_p;
        if (plan->count("--t"))
            ov.t = plan_t;
        std::cout << plan_json(plan_construction(family_from_spec(plan_family), plan_n, ov)).dump(2) << '\n';
    });

    // construct
    std::string con_what, con_family, con_verify = "freeness", con_out_dir;
    std::size_t con_n = 0, con_r = 0;
    double con_p = 0, con_t = 0;
    auto* con = app.add_subcommand("construct", "run a construction and write graph.txt plus report.json");
    con->add_option("kind", con_what, "deletion | cliquefree")
        ->required()
        ->check(CLI::IsMember({"deletion", "cliquefree"}));
    con->add_option("--family", con_family, "family for deletion");
    con->add_option("--n", con_n, "host size")->required();
    con->add_option("--r", con_r, "uniformity for cliquefree");
    con->add_option("--p", con_p, "override the edge probability");
    con->add_option("--t", con_t, "override the independence target");
    con->add_option("--seed", common.seed, "trial seed");
    con->add_option("--verify", con_verify, "none | freeness | full")
        ->check(CLI::IsMember({"none", "freeness", "full"}));
    con->add_option("--out-dir", con_out_dir, "output directory")->required();
    add_budget(con, common);
    con->callback([&] {
        json cfg = base_config(con_what == "deletion" ? "construct-deletion" : "construct-cliquefree", common);
        cfg["n"] = con_n;
        cfg["verify"] = con_verify;
        if (con->count("--family"))
            cfg["family"] = con_family;
        if (con->count("--r"))
            cfg["r"] = con_r;
        if (con->count("--p"))
            cfg["p"] = con_p;
        if (con->count("--t"))
            cfg["t"] = con_t;
        std::filesystem::create_directories(con_out_dir);
        const auto dir = std::filesystem::path(con_out_dir);
        code = run_single(cfg, (dir / "report.json").string(), [&](TrialOutcome& res) {
            if (res.graph)
                write_text((dir / "graph.txt").string(), serialize(*res.graph));
            std::cout << "edges " << res.record.edges_final.value_or(0) << " free "
                      << (res.record.free ? (*res.record.free ? "true" : "false") : "-") << '\n';
        });
    });

    // constants
    std::vector<std::size_t> const_rl;
    std::size_t const_fr = 0;
    bool const_json = false;
    auto* cst = app.add_subcommand("constants", "closed-form constants next to the generic pipeline");
    auto* rl_opt = cst->add_option("--rl", const_rl, "R L")->expected(2);
    auto* fr_opt = cst->add_option("--fr", const_fr, "R");
    rl_opt->excludes(fr_opt);
    cst->add_flag("--json", const_json, "print JSON instead of a table");
    cst->callback([&] {
        ConstantsSpec spec;
        if (*rl_opt)
            spec = ConstantsSpec{ConstantsSpec::Kind::RL, const_rl[0], const_rl[1]};
        else if (*fr_opt)
            spec = ConstantsSpec{ConstantsSpec::Kind::FR, const_fr, 0};
        else
            throw CLI::RequiredError("--rl or --fr");
        const auto table = closed_form_constants(spec);
        if (const_json)
            std::cout << constants_json(table).dump(2) << '\n';
        else
            std::cout << constants_text(table);
    });

    // experiment
    std::string exp_config;
    json exp_flags = json::object();
    auto* exp = app.add_subcommand("experiment", "seeded batch of trials; writes trials.csv and summary.json");
    exp->add_option("--config", exp_config, "JSON config; flags given here override its keys")
        ->check(CLI::ExistingFile);
    struct Flag {
        const char* name;
        const char* key;
        enum { Str, Size, Real } kind;
    };
    static const Flag flags[] = {
        {"--task", "task", Flag::Str},         {"--family", "family", Flag::Str},
        {"--n", "n", Flag::Size},              {"--r", "r", Flag::Size},
        {"--p", "p", Flag::Real},              {"--t", "t", Flag::Real},
        {"--k", "k", Flag::Size},              {"--alpha", "alpha", Flag::Str},
        {"--extractor", "extractor", Flag::Str}, {"--input", "input", Flag::Str},
        {"--pattern", "pattern", Flag::Str},   {"--tree", "tree", Flag::Str},
        {"--host-p", "host_p", Flag::Real},    {"--seed", "base_seed", Flag::Size},
        {"--trials", "trials", Flag::Size},    {"--verify", "verify", Flag::Str},
        {"--budget-nodes", "budget_nodes", Flag::Size}, {"--budget-ms", "budget_time_ms", Flag::Size},
        {"--budget-resamples", "budget_resamples", Flag::Size}, {"--threads", "threads", Flag::Size},
        {"--out-dir", "out_dir", Flag::Str}};
    std::vector<std::string> flag_values(std::size(flags));
    for (std::size_t i = 0; i < std::size(flags); ++i)
        exp->add_option(flags[i].name, flag_values[i], flags[i].key);
    std::vector<std::uint64_t> exp_seeds;
    exp->add_option("--seeds", exp_seeds, "explicit seed list");
    bool exp_no_enforce = false;
    exp->add_flag("--no-enforce-precondition", exp_no_enforce, "run lll even when the degree condition fails");
    exp->callback([&] {
        json cfg = json::object();
        if (!exp_config.empty()) {
            std::ifstream in(exp_config);
            try {
                cfg = json::parse(in);
            } catch (const nlohmann::json::parse_error& e) {
                throw Error(Errc::Config, exp_config + ": " + e.what());
            }
            if (!cfg.is_object())
                throw Error(Errc::Config, exp_config + ": config must be a JSON object");
        }
        for (std::size_t i = 0; i < std::size(flags); ++i) {
            if (!exp->count(flags[i].name))
                continue;
            const std::string& v = flag_values[i];
            try {
                switch (flags[i].kind) {
                case Flag::Str: cfg[flags[i].key] = v; break;
                case Flag::Size: cfg[flags[i].key] = static_cast<std::uint64_t>(std::stoull(v)); break;
                case Flag::Real: cfg[flags[i].key] = std::stod(v); break;
                }
            } catch (const std::logic_error&) {
                throw Error(Errc::Config, std::string(flags[i].name) + ": bad value '" + v + "'");
            }
        }
        if (exp->count("--seeds")) {
            cfg.erase("base_seed");
            cfg.erase("trials");
            cfg["seeds"] = exp_seeds;
        }
        if (exp_no_enforce)
            cfg["enforce_precondition"] = false;
        const auto res = run_experiment(parse_config(cfg));
        const auto& agg = res.aggregate;
        std::cout << "trials " << agg["trials"].get<std::size_t>() << " passed " << agg["passed"].get<std::size_t>()
                  << '\n';
        if (!cfg.contains("out_dir"))
            std::cout << to_csv(res.records);
        code = res.exit_code();
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? exit_ok : exit_usage;
    } catch (const Error& e) {
        std::cerr << "hfree: " << e.what() << '\n';
        return exit_for(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "hfree: " << e.what() << '\n';
        return exit_usage;
    }
    return code;
}
