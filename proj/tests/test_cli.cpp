#include "report.hpp"

#include "laxlab/error.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace laxlab;
using namespace laxlab::cli;

namespace {

struct Run {
    std::string out;
    int code;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " LAXLAB_CLI_PATH " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
    const int status = pclose(p);
    return {out, WIFEXITED(status) ? WEXITSTATUS(status) : -1};
}

RunReport sample_report() {
    RunReport r;
    r.command = "fredholm gap";
    r.parameters = {{"order", "64"}, {"interval", "s:inf"}};
    r.columns = {"s", "det"};
    for (double s : parse_grid("-6:2:0.25")) r.rows.push_back({s, std::exp(s) / 3});
    r.max_abs_residual = 1.0 / 3.0;
    r.self_reported_error = 2.5e-17;
    r.seed = 7;
    return r;
}

} // namespace

TEST(Report, CanonicalFormatting) {
    const nlohmann::json j = {{"b", 1.0 / 3}, {"a", {1, 2}}, {"c", NAN}};
    EXPECT_EQ(canonical_json(j), "{\n  \"a\": [1, 2],\n  \"b\": 0.33333333333333331,\n  \"c\": null\n}\n");
}

TEST(Report, JsonRoundTrip) {
    const auto r = sample_report();
    const auto j = nlohmann::json::parse(emit_json(r));
    EXPECT_EQ(j["command"], "fredholm gap");
    EXPECT_EQ(j["seed"], 7);
    EXPECT_TRUE(j["wall_time"].is_null());
    EXPECT_FALSE(j.contains("check"));
    EXPECT_EQ(j["max_abs_residual"].get<double>(), 1.0 / 3.0);
    ASSERT_EQ(j["rows"].size(), r.rows.size());
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        for (std::size_t k = 0; k < 2; ++k) EXPECT_EQ(j["rows"][i][k].get<double>(), r.rows[i][k]);
    EXPECT_EQ(emit_json(r), emit_json(r));
}

TEST(Report, CsvHasOneLinePerGridPoint) {
    const auto csv = emit_csv(sample_report());
    std::istringstream ss(csv);
    std::string line;
    int lines = 0;
    while (std::getline(ss, line)) ++lines;
    EXPECT_EQ(lines, 1 + 33);
    EXPECT_EQ(csv.substr(0, 6), "s,det\n");
}

TEST(Report, Grids) {
    const auto g = parse_grid("-6:2:0.25");
    EXPECT_EQ(g.size(), 33u);
    EXPECT_EQ(g.front(), -6.0);
    EXPECT_EQ(g.back(), 2.0);
    EXPECT_EQ(parse_grid("0:1:0.3").size(), 4u);
    EXPECT_EQ(parse_list("1,2.5,-3"), (std::vector<double>{1, 2.5, -3}));
    EXPECT_EQ(parse_int_list("-1,0,2"), (std::vector<int>{-1, 0, 2}));
    EXPECT_THROW(parse_grid("0:1"), Error);
    EXPECT_THROW(parse_grid("1:0:0.1"), Error);
    EXPECT_THROW(parse_grid("0:1:x"), Error);
    EXPECT_THROW(parse_int_list("1.5"), Error);
}

TEST(Report, Suggestions) {
    const std::vector<std::string> known{"--step", "--seed", "--t-end", "flow"};
    EXPECT_EQ(suggest("--stpe", known).front(), "--step");
    EXPECT_EQ(suggest("flwo", known).front(), "flow");
    EXPECT_TRUE(suggest("--banana", known).empty());
}

TEST(Report, CounterUniform) {
    double s = 0;
    for (int i = 0; i < 10000; ++i) {
        const double u = counter_uniform(3, i);
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        s += u;
    }
    EXPECT_NEAR(s / 10000, 0.5, 0.02);
    EXPECT_EQ(counter_uniform(3, 5), counter_uniform(3, 5));
    EXPECT_NE(counter_uniform(3, 5), counter_uniform(4, 5));
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("toda flow --stpe 1").code, 2);
    EXPECT_EQ(run("toda").code, 2);
    EXPECT_EQ(run("twotoda pde --c 0").code, 3);
    EXPECT_EQ(run("fredholm scaling --N 80,20 --check").code, 4);
    EXPECT_EQ(run("fredholm scaling --N 80,20").code, 0);
    EXPECT_EQ(run("aci curve --check").code, 0);
}

TEST(Cli, ReportsAreReproducible) {
    const auto a = run("ensemble sample --count 20000 --seed 5 --check", "LAXLAB_THREADS=1");
    const auto b = run("ensemble sample --count 20000 --seed 5 --check", "LAXLAB_THREADS=3");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_NE(a.out, run("ensemble sample --count 20000 --seed 6 --check").out);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["parameters"]["count"], "20000");
    EXPECT_EQ(j["parameters"]["interval"], "-inf:0");
    EXPECT_TRUE(j["check"]["passed"].get<bool>());
}

TEST(Cli, CsvOutput) {
    const std::string path = ::testing::TempDir() + "laxlab_gap.csv";
    ASSERT_EQ(run("fredholm gap --s-grid -6:2:0.25 --order 32 --out " + path).code, 0);
    std::ifstream f(path);
    std::string line;
    int lines = 0;
    while (std::getline(f, line)) ++lines;
    EXPECT_EQ(lines, 34);
}

TEST(Cli, LambdaZeroIsOne) {
    const auto j = nlohmann::json::parse(run("fredholm gap --s-grid -1:0:0.5 --lambda 0").out);
    for (const auto& row : j["rows"]) EXPECT_EQ(row[1].get<double>(), 1.0);
}
