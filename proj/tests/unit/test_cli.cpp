#include "cli.hpp"

#include "qlb/dataset.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using nlohmann::json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = qlb::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qlb_cli_" + name)).string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, GenThenValidate) {
  const auto csv = temp_path("gen.csv");
  const auto g = run({"gen", "--kind", "lasso", "--d", "16", "--w", "3", "--p", "0.1", "--rows",
                      "200", "--csv", csv, "--seed", "3", "--no-timestamp"});
  ASSERT_EQ(g.code, 0) << g.err;
  const auto doc = json::parse(g.out);
  EXPECT_EQ(doc["command"], "gen");
  EXPECT_EQ(doc["result"]["W"].size(), 3u);
  EXPECT_FALSE(doc.contains("timestamp"));
  const auto S = qlb::load_csv(csv);
  EXPECT_EQ(S.rows(), 200u);
  EXPECT_EQ(S.dim(), 16u);

  const auto v = run({"validate", "--csv", csv});
  ASSERT_EQ(v.code, 0) << v.err;
  const auto vd = json::parse(v.out);
  EXPECT_TRUE(vd["result"]["valid"].get<bool>());
  EXPECT_TRUE(vd.contains("timestamp"));
}

TEST(Cli, ValidateReportsViolations) {
  const auto csv = temp_path("bad.csv");
  {
    std::ofstream f(csv);
    f << "2,2,linf\n0.5,2.0,1.0\n0.5,0.5,0.0\n";
  }
  const auto v = run({"validate", "--csv", csv, "--no-timestamp"});
  EXPECT_EQ(v.code, 1);
  const auto doc = json::parse(v.out);
  EXPECT_FALSE(doc["result"]["valid"].get<bool>());
  EXPECT_EQ(doc["result"]["violations"][0]["row"], 0);
  // Rows are y first, then x; the bad cell is x_0 of row 0.
  EXPECT_EQ(doc["result"]["violations"][0]["col"], 0);
}

TEST(Cli, SolveLassoIsReproducibleAndNearOptimal) {
  const auto csv = temp_path("solve.csv");
  ASSERT_EQ(run({"gen", "--d", "12", "--w", "2", "--p", "0.1", "--rows", "300", "--csv", csv,
                 "--seed", "9", "--no-timestamp"})
                .code,
            0);
  const std::vector<std::string> args{"solve-lasso", "--csv", csv, "--eps", "0.1", "--seed", "4",
                                      "--no-timestamp"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto S = qlb::load_csv(csv);
  const auto ref = oracle::lasso_minimum(S.X, S.y, 5000, 20000);
  const auto doc = json::parse(a.out);
  EXPECT_LE(doc["result"]["objective"].get<double>(), ref.value + 0.1);

  auto quantum = args;
  quantum.insert(quantum.end(), {"--mode", "quantum"});
  const auto q = run(quantum);
  ASSERT_EQ(q.code, 0) << q.err;
  const auto qd = json::parse(q.out);
  EXPECT_EQ(qd["result"]["mode"], "quantum");
  EXPECT_TRUE(qd["config"].contains("emulator"));
}

TEST(Cli, SeedFromEnvironment) {
  const auto csv = temp_path("env.csv");
  ::setenv("QLB_SEED", "77", 1);
  const auto g = run({"gen", "--d", "4", "--rows", "10", "--csv", csv, "--no-timestamp"});
  ::unsetenv("QLB_SEED");
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_EQ(json::parse(g.out)["config"]["seed"], 77);
  ::setenv("QLB_SEED", "abc", 1);
  const auto bad = run({"gen", "--d", "4", "--rows", "10", "--csv", csv});
  ::unsetenv("QLB_SEED");
  EXPECT_EQ(bad.code, 1);
}

TEST(Cli, DistancesAllPass) {
  const auto r = run({"distances", "--N", "100,1000", "--m-min", "1", "--m-max", "10", "--p",
                      "0.05", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["result"]["all_pass"].get<bool>());
  EXPECT_EQ(doc["result"]["rows"].size(), 20u);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"gen", "--d", "4", "--rows", "10", "--csv", temp_path("x.csv"), "--bogus"}).code,
            1);
  EXPECT_EQ(run({"solve-lasso"}).code, 1);
  EXPECT_EQ(run({"solve-lasso", "--csv", temp_path("x.csv"), "--eps", "0.7"}).code, 1);
  EXPECT_EQ(run({"gen", "--d", "4", "--rows", "10", "--csv", temp_path("x.csv"), "--p", "1/x"})
                .code,
            1);
  EXPECT_EQ(run({"solve-lasso", "--csv", temp_path("does_not_exist.csv")}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
  EXPECT_EQ(run({}).code, 1);
}

TEST(Cli, CsvErrorsAreValidationFailures) {
  const auto csv = temp_path("short.csv");
  {
    std::ofstream f(csv);
    f << "2,2,linf\n0.5,0.5,1.0\n0.5\n";
  }
  const auto r = run({"solve-lasso", "--csv", csv});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;
}

TEST(Cli, WritesToOutFile) {
  const auto path = temp_path("distances.json");
  const auto r = run({"distances", "--N", "100", "--m-min", "2", "--m-max", "3", "--out", path,
                      "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  EXPECT_EQ(json::parse(read_file(path))["command"], "distances");
}

TEST(Cli, ScalingFitsAndCsv) {
  const auto r = run({"scaling", "--dims", "16,32,64", "--eps", "0.2", "--mode", "classical",
                      "--N", "64", "--min-points", "3", "--no-timestamp", "--out",
                      temp_path("scaling.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(read_file(temp_path("scaling.json")));
  EXPECT_EQ(doc["result"]["points"].size(), 3u);
  ASSERT_GE(doc["result"]["fits"].size(), 1u);
  EXPECT_NEAR(doc["result"]["fits"][0]["input_queries"]["slope"].get<double>(), 1.0, 0.1);

  const auto csv = run({"scaling", "--dims", "16,32", "--eps", "0.2", "--mode", "classical",
                        "--N", "64"});
  ASSERT_EQ(csv.code, 0) << csv.err;
  EXPECT_EQ(csv.out.rfind("d,eps,N,mode", 0), 0u);
}

TEST(Cli, RecoverLassoSmall) {
  const auto r = run({"recover", "--kind", "lasso", "--d", "32", "--eps", "0.2", "--M", "4000",
                      "--seeds", "2", "--no-timestamp"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["result"].is_object());
}
