#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

#include "orderpick/io.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
};

CliRun cli(const std::string& args) {
  std::string cmd = std::string(ORDERPICK_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* p = popen(cmd.c_str(), "r");
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
  int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  fs::path d = fs::temp_directory_path() / ("orderpick_cli_" + name);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

int lines(const fs::path& p) {
  std::ifstream in(p);
  int n = 0;
  for (std::string l; std::getline(in, l);) n += !l.empty();
  return n;
}

const std::string kData = ORDERPICK_DATA_DIR;

}  // namespace

TEST(Cli, SolvePrintsExactTurnoverFraction) {
  CliRun r = cli("solve " + kData + "/i1.json --objective turnover --fifo-order-start");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("avg_turnover 40/3"), std::string::npos) << r.out;
  CliRun m = cli("solve " + kData + "/i1.json");
  EXPECT_NE(m.out.find("makespan 16"), std::string::npos) << m.out;
}

TEST(Cli, SolveIsDeterministic) {
  fs::path d = scratch("det");
  ASSERT_EQ(cli("gen --orders 6 --count 2 --seed 11 --out " + (d / "inst").string()).code, 0);
  std::string inst = (d / "inst" / "instance_11.json").string();
  ASSERT_EQ(cli("solve " + inst + " --out " + (d / "a").string() + " --trace " + (d / "a.jsonl").string()).code, 0);
  ASSERT_EQ(cli("solve " + inst + " --out " + (d / "b").string() + " --trace " + (d / "b.jsonl").string()).code, 0);
  for (const char* f : {"instance_11.makespan.solution.json", "instance_11.makespan.schedule.csv"})
    EXPECT_EQ(orderpick::read_file((d / "a" / f).string()), orderpick::read_file((d / "b" / f).string())) << f;
  EXPECT_EQ(orderpick::read_file((d / "a.jsonl").string()), orderpick::read_file((d / "b.jsonl").string()));
}

TEST(Cli, SimulateManifestRowCount) {
  fs::path d = scratch("sim");
  std::ofstream(d / "manifest.json") << R"({"schema_version": 1, "seed": 1, "output": "out",
    "generator": {"count": 20, "orders": 5, "capacity": 2, "seed": 1},
    "runs": [{"policy": "vtwb"}, {"policy": "vtwb,routing=optimal", "name": "opt_routing"},
             {"policy": "vtwb,routing=optimal,batching=optimal", "name": "opt_batching"},
             {"policy": "reopt,vtw=2", "name": "intervention"}, {"policy": "reopt"}, {"policy": "reopt*"}]})";
  CliRun r = cli("simulate " + (d / "manifest.json").string() + " --jobs 4");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(lines(d / "out" / "results.csv"), 121);
  EXPECT_EQ(lines(d / "out" / "metrics.csv"), 121);
  int traces = 0;
  for (auto& e : fs::directory_iterator(d / "out" / "traces")) traces += e.path().extension() == ".jsonl";
  EXPECT_EQ(traces, 120);
  std::string first = orderpick::read_file((d / "out" / "results.csv").string());
  ASSERT_EQ(cli("simulate " + (d / "manifest.json").string() + " --jobs 1 --out " + (d / "again").string()).code, 0);
  // Runtimes differ between runs; everything else must not.
  auto strip = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string out;
    for (std::string l; std::getline(in, l);) out += l.substr(0, l.rfind(',')) + "\n";
    return out;
  };
  EXPECT_EQ(strip(first), strip(orderpick::read_file((d / "again" / "results.csv").string())));
  ASSERT_EQ(cli("report " + (d / "out").string()).code, 0);
  EXPECT_EQ(lines(d / "out" / "ladder.csv"), 7);
  EXPECT_TRUE(fs::exists(d / "out" / "waiting.csv"));
}

TEST(Cli, ExitCodes) {
  fs::path d = scratch("codes");
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("solve --objective sideways " + kData + "/i1.json").code, 1);
  std::ofstream(d / "bad.json") << R"({"schema_version": 99})";
  EXPECT_EQ(cli("solve " + (d / "bad.json").string()).code, 2);
  std::ofstream(d / "manifest.json") << R"({"instances": ["missing.json"], "runs": [{"policy": "reopt"}]})";
  EXPECT_EQ(cli("simulate " + (d / "manifest.json").string()).code, 2);
  std::ofstream(d / "policy.json") << R"({"generator": {"count": 1}, "runs": [{"policy": "teleport"}]})";
  EXPECT_EQ(cli("simulate " + (d / "policy.json").string()).code, 2);
  ASSERT_EQ(cli("gen --orders 12 --seed 3 --out " + d.string()).code, 0);
  EXPECT_EQ(
      cli("solve " + (d / "instance_3.json").string() + " --dominance off").code, 0);
  EXPECT_EQ(cli("solve " + (d / "instance_3.json").string()).code, 0);
  setenv("ORDERPICK_MAX_STATES", "50", 1);
  EXPECT_EQ(cli("solve " + (d / "instance_3.json").string()).code, 3);
  unsetenv("ORDERPICK_MAX_STATES");
  CliRun v = cli("--version");
  EXPECT_EQ(v.code, 0);
  EXPECT_NE(v.out.find("instance schema 1"), std::string::npos);
}

TEST(Cli, CheckSolutionFlagsTampering) {
  fs::path d = scratch("check");
  std::ofstream(d / "sol.txt") << "y_k1_d_s1 1\ny_k1_s1_d 1\nx_k1_o1 1\nt_s1 0\n";
  CliRun r = cli("check-solution " + kData + "/i1.json --solution " + (d / "sol.txt").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("infeasible"), std::string::npos);
}
