// Drives the glround binary as a subprocess and checks exit codes and files.
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "glround/bench.hpp"
#include "glround/cgep.hpp"
#include "glround/word_solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GLROUND_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json last_record(const fs::path& dir) {
  std::ifstream in(dir / "records.jsonl");
  std::string line, last;
  while (std::getline(in, line))
    if (!line.empty()) last = line;
  return json::parse(last);
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("glround_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string out(const std::string& sub = "") const { return (dir_ / sub).string(); }
  fs::path dir_;
};

}  // namespace

TEST_F(Cli, GenWritesInstanceWithLargeEntries) {
  const auto r = run("gen --set example1 --v 1,0,0 --L 100 --seed 42 -o " + out());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("master_seed: 42"), std::string::npos);
  EXPECT_NE(r.output.find("digest: "), std::string::npos);
  const json inst = json::parse(slurp(dir_ / "instance.json"));
  std::size_t digits = 0;
  for (const auto& x : inst.at("w")) digits = std::max(digits, x.get<std::string>().size());
  EXPECT_GT(digits, 100u);
  EXPECT_EQ(inst.at("schema_version"), 1);
}

TEST_F(Cli, GenZeroLengthAndSolveEmptyWord) {
  ASSERT_EQ(run("gen --set example1 --L 0 --seed 1 -o " + out()).code, 0);
  const json inst = json::parse(slurp(dir_ / "instance.json"));
  EXPECT_EQ(inst.at("w"), inst.at("v"));
  const auto r = run("solve " + out("instance.json") + " -o " + out());
  EXPECT_EQ(r.code, 0) << r.output;
  const json res = json::parse(slurp(dir_ / "solve.json"));
  EXPECT_TRUE(res.at("word").empty());
  EXPECT_EQ(res.at("status"), "recovered");
}

TEST_F(Cli, GenRandomSeedIsPrinted) {
  const auto r = run("gen --set example1 --L 3 -o " + out());
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("master_seed: "), std::string::npos);
  EXPECT_TRUE(last_record(dir_).at("config").contains("seed"));
}

TEST_F(Cli, SingularSetExitsTwoAndNamesMatrix) {
  std::ofstream(dir_ / "bad.json") << R"({"generators": [[["1","0"],["0","1"]], [["1","2"],["2","4"]]],
                                          "labels": ["A", "Bad"]})";
  const auto r = run("gen --set " + out("bad.json") + " --L 3 --seed 1 -o " + out());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("Bad"), std::string::npos) << r.output;
}

TEST_F(Cli, NonIntegerSetReportsEntry) {
  std::ofstream(dir_ / "frac.json") << R"({"generators": [[["1","0"],["0","1/2"]]]})";
  const auto r = run("gen --set " + out("frac.json") + " --L 3 --seed 1 -o " + out());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("row 2 col 2"), std::string::npos) << r.output;
}

TEST_F(Cli, SolveMalformedExitsTwo) {
  std::ofstream(dir_ / "broken.json") << "{ not json";
  EXPECT_EQ(run("solve " + out("broken.json") + " -o " + out()).code, 2);
  std::ofstream(dir_ / "partial.json") << R"({"generators": [[["1"]]], "v": ["1"]})";
  EXPECT_EQ(run("solve " + out("partial.json") + " -o " + out()).code, 2);
  EXPECT_EQ(run("solve " + out("missing.json") + " -o " + out()).code, 2);
}

TEST_F(Cli, SolveRecoversExample1) {
  int ok = 0;
  for (int seed = 1; seed <= 10; ++seed) {
    ASSERT_EQ(run("gen --set example1 --L 50 --seed " + std::to_string(seed) + " -o " + out()).code, 0);
    ok += run("solve " + out("instance.json") + " -o " + out()).code == 0;
  }
  EXPECT_GE(ok, 9);
}

TEST_F(Cli, SolveFailureExitsOne) {
  // A w off the orbit of every short word: greedy descent cannot reach v.
  ASSERT_EQ(run("gen --set example1 --L 5 --seed 3 -o " + out()).code, 0);
  json inst = json::parse(slurp(dir_ / "instance.json"));
  inst.erase("hidden_word");
  inst["w"] = json::array({"7", "5", "3"});
  std::ofstream(dir_ / "off.json") << inst.dump();
  const auto r = run("solve " + out("off.json") + " -o " + out());
  EXPECT_EQ(r.code, 1) << r.output;
  EXPECT_EQ(json::parse(slurp(dir_ / "solve.json")).at("status"), "failed");
}

TEST_F(Cli, BenchTrivialRow) {
  const auto r = run("bench --set example1 --L 0 --trials 1 --seed 5 -o " + out());
  ASSERT_EQ(r.code, 0) << r.output;
  const auto csv = slurp(dir_ / "bench.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), glround::kBenchCsvHeader);
  EXPECT_NE(csv.find("\n0,1,1,1,"), std::string::npos) << csv;
  const json j = json::parse(slurp(dir_ / "bench.json"));
  EXPECT_EQ(j.at("schema_version"), 1);
}

TEST_F(Cli, BenchFormatCsvOnly) {
  ASSERT_EQ(run("bench --L 2 --trials 3 --seed 5 --format csv -o " + out()).code, 0);
  EXPECT_TRUE(fs::exists(dir_ / "bench.csv"));
  EXPECT_FALSE(fs::exists(dir_ / "bench.json"));
}

TEST_F(Cli, DiagnosePermutationSet) {
  std::ofstream(dir_ / "perm.json") << R"({"generators": [[["0","1","0"],["1","0","0"],["0","0","1"]],
                                                          [["0","0","1"],["1","0","0"],["0","1","0"]]]})";
  const auto r = run("diagnose --set " + out("perm.json") +
                     " --mesh 100 --lyapunov-n 20 --lyapunov-trials 10 --seed 1 -o " + out());
  ASSERT_EQ(r.code, 0) << r.output;
  const json j = json::parse(slurp(dir_ / "diagnostics.json"));
  EXPECT_TRUE(j.at("contracting_witness").is_null());
  EXPECT_NEAR(j.at("lyapunov").at("gamma1").get<double>(), 0.0, 1e-9);
  EXPECT_TRUE(fs::exists(dir_ / "s_table.csv"));
}

TEST_F(Cli, DiagnoseExample1) {
  const auto r = run("diagnose --set example1 --S-n 2 --alpha 0.4 --lyapunov-n 50 --lyapunov-trials 20 --seed 2 "
                     "--bound-L 200 -o " + out());
  ASSERT_EQ(r.code, 0) << r.output;
  const json j = json::parse(slurp(dir_ / "diagnostics.json"));
  EXPECT_NEAR(j.at("N").get<double>(), 12157.1, 0.1);
  EXPECT_LT(j.at("S_table").at(0).at("estimate").get<double>(), 0.83);
  EXPECT_TRUE(j.at("error_bound").is_object());
}

TEST_F(Cli, TspVerifyMatches) {
  const auto r = run("tsp --random-n 4 --seed 11 --verify -o " + out());
  ASSERT_EQ(r.code, 0) << r.output;
  const json v = json::parse(slurp(dir_ / "verify.json"));
  EXPECT_TRUE(v.at("match").get<bool>());
  const auto inst = glround::CgepInstance::from_json(json::parse(slurp(dir_ / "cgep_instance.json")));
  EXPECT_EQ(inst.graph.n(), 4u);

  std::ofstream(dir_ / "g3.txt") << "3 4\n5\n";
  const auto r3 = run("tsp --graph " + out("g3.txt") + " --verify -o " + out());
  ASSERT_EQ(r3.code, 0) << r3.output;
  EXPECT_TRUE(json::parse(slurp(dir_ / "verify.json")).at("match").get<bool>());
}

TEST_F(Cli, TspBudgetExitsThree) {
  const auto r = run("tsp --random-n 8 --seed 1 --verify -o " + out());
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.output.find("required budget"), std::string::npos) << r.output;
}

TEST_F(Cli, TspBadGraphExitsTwo) {
  std::ofstream(dir_ / "g.txt") << "3 0\n5\n";
  EXPECT_EQ(run("tsp --graph " + out("g.txt") + " -o " + out()).code, 2);
}

TEST_F(Cli, BadArgumentsExitTwo) {
  EXPECT_EQ(run("gen --set nosuchfixture --L 3 -o " + out()).code, 2);
  EXPECT_EQ(run("gen -o " + out()).code, 2);
  EXPECT_EQ(run("tsp --random-n 4 --variant iv -o " + out()).code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST_F(Cli, RoundTripFilesReparse) {
  ASSERT_EQ(run("gen --set example2 --L 30 --seed 8 -o " + out()).code, 0);
  const auto text = slurp(dir_ / "instance.json");
  const auto inst = glround::WordInstance::from_json(json::parse(text));
  EXPECT_EQ(inst.to_json().dump(2) + "\n", text);
  ASSERT_EQ(run("solve " + out("instance.json") + " -o " + out()).code == 2, false);
  const auto res_text = slurp(dir_ / "solve.json");
  const auto res = glround::SolveResult::from_json(json::parse(res_text));
  EXPECT_EQ(res.to_json().dump(2) + "\n", res_text);
}

TEST_F(Cli, RerunFromRecordIsByteIdentical) {
  ASSERT_EQ(run("gen --set example1 --L 40 -o " + out("a")).code, 0);
  const auto first = slurp(dir_ / "a" / "instance.json");
  ASSERT_EQ(run("--config " + out("a/records.jsonl") + " -o " + out("b")).code, 0);
  EXPECT_EQ(slurp(dir_ / "b" / "instance.json"), first);

  ASSERT_EQ(run("bench --L 5,20 --trials 20 --seed 9 -o " + out("c")).code, 0);
  ASSERT_EQ(run("bench --L 5,20 --trials 20 --seed 9 -o " + out("d")).code, 0);
  auto strip = [](json j) {
    for (auto& row : j.at("rows")) row.erase("seconds");
    return j;
  };
  EXPECT_EQ(strip(json::parse(slurp(dir_ / "c" / "bench.json"))), strip(json::parse(slurp(dir_ / "d" / "bench.json"))));
  auto rc = last_record(dir_ / "c"), rd = last_record(dir_ / "d");
  EXPECT_EQ(rc.at("config_digest"), rd.at("config_digest"));
  EXPECT_EQ(strip(rc.at("payload")), strip(rd.at("payload")));

  ASSERT_EQ(run("tsp --random-n 4 --seed 3 --verify -o " + out("e")).code, 0);
  ASSERT_EQ(run("--config " + out("e/records.jsonl") + " -o " + out("f")).code, 0);
  EXPECT_EQ(slurp(dir_ / "e" / "verify.json"), slurp(dir_ / "f" / "verify.json"));
}

TEST_F(Cli, RecordsAreAppendOnly) {
  ASSERT_EQ(run("gen --L 2 --seed 1 -o " + out()).code, 0);
  const auto before = slurp(dir_ / "records.jsonl");
  ASSERT_EQ(run("gen --L 3 --seed 2 -o " + out()).code, 0);
  const auto after = slurp(dir_ / "records.jsonl");
  EXPECT_EQ(after.substr(0, before.size()), before);
  const json rec = last_record(dir_);
  for (const char* key : {"timestamp", "command", "config_digest", "config", "payload", "tool_version"})
    EXPECT_TRUE(rec.contains(key)) << key;
}
