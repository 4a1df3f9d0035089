#include "hfree/experiment.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hfree;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name)
{
    auto dir = fs::temp_directory_path() / ("hfree_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(HFREE_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string data(const std::string& name) { return std::string(HFREE_DATA_DIR) + "/" + name; }

} // namespace

TEST(Config, RejectsUnknownKeysAndMissingParameters)
{
    EXPECT_THROW(parse_config(json{{"task", "plan"}, {"family", "rl:3:2"}, {"n", 10}, {"colour", 1}}), Error);
    EXPECT_THROW(parse_config(json{{"task", "fly"}}), Error);
    EXPECT_THROW(parse_config(json{{"family", "rl:3:2"}}), Error);
    EXPECT_THROW(parse_config(json{{"task", "plan"}, {"n", 10}}), Error);
    EXPECT_THROW(parse_config(json{{"task", "color-lll"}, {"input", "x.txt"}}), Error);   // no k
    EXPECT_THROW(parse_config(json{{"task", "color-lll"}, {"k", 4}, {"n", 10}, {"r", 3}}), Error);   // no host_p
    EXPECT_THROW(parse_config(json{{"task", "construct-cliquefree"}, {"n", -3}, {"r", 3}}), Error);
    EXPECT_THROW(parse_config(json{{"task", "construct-cliquefree"}, {"n", 10}, {"r", 3}, {"verify", "most"}}), Error);
    EXPECT_THROW(parse_config(json{{"task", "construct-cliquefree"}, {"n", 10}, {"r", 3}, {"seeds", {1}}, {"trials", 2}}),
                 Error);
    EXPECT_THROW(parse_config(json{{"task", "color-peel"}, {"input", "x"}, {"alpha", "2/3"}}), Error);
    EXPECT_THROW(parse_config(json{{"task", "color-peel"}, {"input", "x"}, {"alpha", "1/x"}}), Error);
    EXPECT_THROW(parse_config(json::array()), Error);

    const auto c = parse_config(json{{"task", "construct-cliquefree"}, {"n", 10}, {"r", 3}, {"base_seed", 5},
                                     {"trials", 3}, {"verify", "none"}});
    EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{derive_seed(5, 0), derive_seed(5, 1), derive_seed(5, 2)}));
    EXPECT_EQ(c.verify, VerifyLevel::None);
    try {
        parse_config(json{{"task", "plan"}, {"bogus", true}});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::Config);
    }
}

TEST(Experiment, ZeroTrialsGiveHeaderOnlyCsv)
{
    const auto dir = scratch("zero");
    auto cfg = parse_config(json{{"task", "construct-cliquefree"}, {"n", 10}, {"r", 3}, {"trials", 0},
                                 {"out_dir", dir.string()}});
    const auto res = run_experiment(cfg);
    EXPECT_TRUE(res.records.empty());
    EXPECT_EQ(res.exit_code(), 0);
    const std::string csv = slurp(dir / "trials.csv");
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1);
    EXPECT_EQ(csv.rfind("trial,seed,task,", 0), 0u);
}

TEST(Experiment, SingleRecordCsvHasTwoLines)
{
    TrialRecord x;
    x.task = "plan";
    x.passed = true;
    const std::string csv = to_csv({x});
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
}

TEST(Experiment, CsvRoundTripIgnoresRuntime)
{
    std::vector<TrialRecord> recs(3);
    recs[0].task = "color-tree";
    recs[0].family = "path:3:3";
    recs[0].n = 9;
    recs[0].palette = 5;
    recs[0].free = true;
    recs[0].passed = true;
    recs[0].runtime_ms = 12.5;
    recs[1].trial = 1;
    recs[1].seed = ~std::uint64_t{0};
    recs[1].task = "check-free";
    recs[1].family = "a,b \"quoted\"";
    recs[1].failure = "line one\nline two, with comma";
    recs[1].alpha_exact = false;
    recs[2].trial = 2;
    recs[2].task = "solve-alpha";
    recs[2].alpha = 0;
    const auto back = from_csv(to_csv(recs));
    EXPECT_EQ(back, recs);
    recs[0].runtime_ms = 99;
    EXPECT_EQ(back, recs);
    recs[0].palette = 6;
    EXPECT_NE(back, recs);
    EXPECT_THROW(from_csv("nope\n"), Error);
}

TEST(Experiment, CliqueFreeBatchOfFiftySeeds)
{
    const auto dir = scratch("cliquefree");
    auto cfg = parse_config(json{{"task", "construct-cliquefree"}, {"n", 25}, {"r", 3}, {"base_seed", 11},
                                 {"trials", 50}, {"threads", 4}, {"out_dir", dir.string()}});
    const auto res = run_experiment(cfg);
    ASSERT_EQ(res.records.size(), 50u);
    EXPECT_EQ(res.exit_code(), 0);
    EXPECT_EQ(res.aggregate["free_rate"].get<double>(), 1.0);
    EXPECT_EQ(res.aggregate["pass_rate"].get<double>(), 1.0);
    for (std::size_t i = 0; i < 50; ++i) {
        EXPECT_EQ(res.records[i].trial, i);
        EXPECT_EQ(res.records[i].certificate, "certs/trial_" + std::to_string(i) + ".json");
        EXPECT_TRUE(fs::exists(dir / res.records[i].certificate));
    }
    EXPECT_EQ(from_csv(slurp(dir / "trials.csv")), res.records);
}

TEST(Experiment, DeletionBatchIsTriangleFreeWithColumnsFilled)
{
    auto cfg = parse_config(json{{"task", "construct-deletion"}, {"family", "clique:2:3"}, {"n", 30}, {"p", 0.2},
                                 {"t", 10.0}, {"base_seed", 2}, {"trials", 20}, {"verify", "full"}});
    const auto res = run_experiment(cfg);
    ASSERT_EQ(res.records.size(), 20u);
    EXPECT_EQ(res.exit_code(), 0);
    for (const auto& x : res.records) {
        EXPECT_EQ(x.free, std::optional<bool>(true));
        EXPECT_TRUE(x.alpha.has_value());
        EXPECT_TRUE(x.edges_final.has_value());
        EXPECT_EQ(*x.edges_sampled, *x.edges_final + *x.removed_edges);
    }
}

TEST(Experiment, ThreadCountDoesNotChangeResults)
{
    const json base{{"task", "color-tree"}, {"tree", "path:3:3"}, {"n", 12}, {"host_p", 0.1}, {"base_seed", 4},
                    {"trials", 12}};
    json one = base, many = base;
    one["threads"] = 1;
    many["threads"] = 6;
    const auto a = run_experiment(parse_config(one));
    const auto b = run_experiment(parse_config(many));
    EXPECT_EQ(a.records, b.records);
    EXPECT_EQ(a.exit_code(), 0);
}

TEST(Experiment, FailuresAreRecordedNotThrown)
{
    // k = 2 violates the degree condition on almost any random 3-graph
    auto cfg = parse_config(json{{"task", "color-lll"}, {"k", 2}, {"n", 10}, {"r", 3}, {"host_p", 0.3},
                                 {"seeds", {1, 2, 3}}});
    const auto res = run_experiment(cfg);
    EXPECT_EQ(res.exit_code(), 1);
    EXPECT_EQ(res.aggregate["failing_seeds"].size(), 3u);
    for (const auto& x : res.records)
        EXPECT_NE(x.failure.find("PreconditionFailed"), std::string::npos);
}

TEST(Experiment, SeedsReproduceCertificates)
{
    const auto d1 = scratch("det1");
    const auto d2 = scratch("det2");
    json cfg{{"task", "color-indnbd"}, {"k", 8}, {"n", 14}, {"r", 3}, {"host_p", 0.08}, {"seeds", {5, 6}}};
    cfg["out_dir"] = d1.string();
    run_experiment(parse_config(cfg));
    cfg["out_dir"] = d2.string();
    run_experiment(parse_config(cfg));
    for (int i = 0; i < 2; ++i) {
        const std::string name = "certs/trial_" + std::to_string(i) + ".json";
        EXPECT_EQ(slurp(d1 / name), slurp(d2 / name));
    }
}

TEST(Cli, ExitCodes)
{
    EXPECT_EQ(run_cli("solve alpha " + data("fano.txt")), 0);
    EXPECT_EQ(run_cli("check-free " + data("fano.txt") + " --pattern fr:3"), 0);
    EXPECT_EQ(run_cli("check-free " + data("path3.txt") + " --pattern path:3:2"), 1);
    // intentionally violated degree condition
    EXPECT_EQ(run_cli("color lll " + data("fano.txt") + " --k 2"), 1);
    EXPECT_EQ(run_cli("color lll " + data("fano.txt") + " --k 2 --no-enforce-precondition --budget-resamples 50"), 3);
    EXPECT_EQ(run_cli("solve chi " + data("fano.txt") + " --budget-nodes 1"), 3);
    EXPECT_EQ(run_cli("solve chi /nonexistent/file.txt"), 2);
    EXPECT_EQ(run_cli("frobnicate"), 2);
    EXPECT_EQ(run_cli("color indnbd " + data("fano.txt") + " --k 3"), 2);   // odd k
    EXPECT_EQ(run_cli("experiment --task construct-cliquefree --n 10 --r 3 --trials 0"), 0);
    EXPECT_EQ(run_cli("experiment --task construct-cliquefree --n 10"), 2);
}
