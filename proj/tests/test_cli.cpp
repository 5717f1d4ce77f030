#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include <digitdist/cli.hpp>

using namespace digitdist;

namespace
{
    struct Run
    {
        int code;
        std::string out, err;
    };

    Run run(std::vector<std::string> args)
    {
        std::ostringstream o, e;
        int c = dispatch(args, o, e);
        return {c, o.str(), e.str()};
    }

    std::vector<std::string> with(std::vector<std::string> a, std::initializer_list<std::string> extra)
    {
        a.insert(a.end(), extra);
        return a;
    }

    // one cheap invocation per subcommand
    const std::vector<std::vector<std::string>>& commands()
    {
        static const std::vector<std::vector<std::string>> c = {
            {"count", "--q", "2", "--b", "2", "--y", "0", "--z", "16", "--a", "0", "--m", "1", "--r", "0"},
            {"ld-sum", "--q", "2", "--b", "3", "--x", "64", "--epsilon", "0.4", "--mode", "exact-small", "--breakdown"},
            {"s0", "--q", "2", "--b", "2", "--N", "8", "--D", "2", "--xi", "1/3"},
            {"vdc", "--trials", "20", "--max-length", "24", "--seed", "5"},
            {"carry", "--q", "3", "--lambda", "2", "--r", "2", "--alpha", "5/3", "--beta", "1/2", "--N", "500"},
            {"gowers", "--q", "2", "--b", "2", "--k", "2", "--rho", "2", "--oracle", "--node", "3"},
            {"graph", "--q", "2", "--b", "3", "--k", "2"},
            {"contraction", "--q", "2", "--b", "2", "--k", "2", "--decay-rho", "12"},
            {"farey", "--alpha", "3/10", "--n", "5"},
            {"discrepancy", "--alpha", "1/2", "--N", "2"},
            {"discrepancy", "--q", "2", "--sum-m", "4", "--N", "32"},
            {"exponents", "--q", "2", "--b", "2", "--epsilon", "0.3", "--points", "5"},
            {"figure3", "--q", "2", "--b", "2"},
            {"params", "--mu", "1000", "--eta0", "0.5"},
        };
        return c;
    }
}

TEST(Cli, CountBalanced)
{
    auto r = run(commands()[0]);
    ASSERT_EQ(r.code, 0) << r.err;
    Json d = read_document(r.out);
    EXPECT_EQ(d["outputs"]["count"], 8);
    EXPECT_EQ(d["command"], "count");
    EXPECT_EQ(d["inputs"]["z"], 16);
}

TEST(Cli, EveryCommandRoundTripsJson)
{
    for (const auto& c : commands())
    {
        auto r = run(c);
        ASSERT_EQ(r.code, 0) << c[0] << ": " << r.err;
        Json d = read_document(r.out);
        EXPECT_EQ(d["command"], c[0]);
        EXPECT_EQ(Json::parse(dump_document(d)), d);
    }
}

TEST(Cli, EveryCommandRoundTripsCsv)
{
    for (const auto& c : commands())
    {
        auto r = run(with(c, {"--format", "csv"}));
        ASSERT_EQ(r.code, 0) << c[0] << ": " << r.err;
        Table t = read_table(r.out);
        EXPECT_EQ(t.command, c[0]);
        EXPECT_EQ(dump_table(t).size() <= r.out.size(), true);
    }
}

TEST(Cli, GowersOracle)
{
    auto r = run({"gowers", "--q", "2", "--b", "2", "--ell", "1", "--k", "3", "--rho", "2", "--oracle"});
    ASSERT_EQ(r.code, 0) << r.err;
    Json d = read_document(r.out);
    EXPECT_TRUE(d["outputs"].contains("recursive"));
    EXPECT_TRUE(d["outputs"].contains("brute"));
    EXPECT_LE(d["outputs"]["difference"].get<double>(), 1e-9);
    EXPECT_EQ(d["outputs"]["exact_match"], true);
}

TEST(Cli, Figure3Csv)
{
    auto r = run({"figure3", "--q", "2", "--b", "2", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    Table t = read_table(r.out);
    ASSERT_EQ(t.rows.size(), 7u);
    EXPECT_EQ(t.columns[1], "published_log_eta");
    EXPECT_EQ(std::stod(t.rows[0][1]), -270.77);
    EXPECT_EQ(std::stod(t.rows[2][1]), -1993.60);
    EXPECT_EQ(std::stod(t.rows[4][1]), -176866.99);
    EXPECT_EQ(std::stod(t.rows[0][3]), -5.85);
    EXPECT_EQ(std::stod(t.rows[2][3]), -6.95);
    EXPECT_EQ(std::stod(t.rows[4][3]), -9.25);
}

TEST(Cli, GraphEdges)
{
    auto r = run({"graph", "--q", "2", "--b", "2", "--k", "2", "--format", "edges"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto e = read_edge_list(r.out);
    EXPECT_FALSE(e.empty());
    EXPECT_EQ(run({"count", "--format", "edges"}).code, 1);
}

TEST(Cli, ExitCodes)
{
    auto u = run({"count", "--bogus", "1"});
    EXPECT_EQ(u.code, 1);
    EXPECT_NE(u.err.find("usage"), std::string::npos);
    EXPECT_EQ(run({"nosuch"}).code, 1);
    EXPECT_EQ(run({}).code, 1);
    EXPECT_EQ(run({"count", "--q", "3", "--b", "2"}).code, 1);
    EXPECT_EQ(run({"count", "--y", "5", "--z", "5"}).code, 1);
    EXPECT_EQ(run({"farey", "--alpha", "x/y"}).code, 1);
    EXPECT_EQ(run({"gowers", "--k", "3", "--rho", "8", "--oracle"}).code, 1);  // brute budget
    EXPECT_EQ(run({"count", "--workers", "0"}).code, 1);
    EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, BudgetFlagAndEnv)
{
    std::vector<std::string> a{"gowers", "--q", "2", "--b", "2", "--k", "2", "--rho", "3", "--oracle"};
    EXPECT_EQ(run(a).code, 0);
    EXPECT_EQ(run(with(a, {"--budget", "10"})).code, 1);
    ::setenv("DIGITDIST_BUDGET", "10", 1);
    EXPECT_EQ(run(a).code, 1);
    EXPECT_EQ(run(with(a, {"--budget", "100000000"})).code, 0);
    ::unsetenv("DIGITDIST_BUDGET");
}

TEST(Cli, OutFile)
{
    std::string path = ::testing::TempDir() + "cli_out.json";
    auto r = run(with(commands()[8], {"--out", path}));
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    Json d = read_document(ss.str());
    EXPECT_EQ(d["outputs"]["round"], "1/3");
    std::remove(path.c_str());
}

TEST(Cli, SeedRecordedAndWorkersIgnored)
{
    for (const auto& c : commands())
    {
        const bool seeded = std::find(c.begin(), c.end(), "--seed") != c.end();
        auto base = seeded ? c : with(c, {"--seed", "17"});
        auto a = run(with(base, {"--workers", "1"}));
        auto b = run(with(base, {"--workers", "3"}));
        ASSERT_EQ(a.code, 0) << c[0] << ": " << a.err;
        EXPECT_EQ(a.out, b.out) << c[0];
        EXPECT_EQ(read_document(a.out)["seed"], seeded ? 5 : 17);
    }
}

TEST(Cli, VdcSeedMatters)
{
    auto a = run({"vdc", "--trials", "10", "--seed", "1"});
    auto b = run({"vdc", "--trials", "10", "--seed", "2"});
    ASSERT_EQ(a.code, 0);
    Json da = read_document(a.out), db = read_document(b.out);
    EXPECT_EQ(da["outputs"]["plain"]["violations"], 0);
    EXPECT_EQ(da["outputs"]["shift"]["violations"], 0);
    EXPECT_NE(da["outputs"]["plain"]["max_ratio"], db["outputs"]["plain"]["max_ratio"]);
}
