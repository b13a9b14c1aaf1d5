#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "gtrs/frontends.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(GTRS_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 512> buf{};
  while (pipe && fgets(buf.data(), buf.size(), pipe)) out += buf.data();
  const int status = pipe ? pclose(pipe) : -1;
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("gtrs_cli_" + name);
  fs::remove_all(d);
  return d;
}

fs::path worked_bundle() {
  const auto d = dir("worked");
  gtrs::write_bundle(d, gtrs::testing::worked_example());
  return d;
}

}  // namespace

TEST(Cli, SolveWorkedExample) {
  const auto d = worked_bundle();
  for (const char* alg : {"alg1", "alg2", "auto"}) {
    const auto r = run("solve --problem " + d.string() + " --algorithm " + alg);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("objective 2.000000000"), std::string::npos) << r.out;
  }
}

TEST(Cli, MissingMatrixIsInputError) {
  const auto d = worked_bundle();
  fs::remove(d / "Q2.mtx");
  const auto r = run("solve --problem " + d.string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.out.find("Q2.mtx"), std::string::npos) << r.out;
}

TEST(Cli, UnboundedIsSolverFailure) {
  const auto d = dir("unbounded");
  gtrs::GtrsProblem p;
  p.f1 = gtrs::testing::form(gtrs::SparseSymmetric::diagonal(gtrs::Vec{-1, -1}), {0, 0});
  p.f2 = gtrs::testing::form(gtrs::SparseSymmetric::diagonal(gtrs::Vec{-1, 1}), {0, 0}, -1.0);
  gtrs::write_bundle(d, p);
  const auto r = run("solve --problem " + d.string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("unbounded below"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("stage"), std::string::npos) << r.out;
}

TEST(Cli, BadArgumentsAreInputErrors) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("solve").code, 2);
  const auto d = worked_bundle();
  EXPECT_EQ(run("solve --problem " + d.string() + " --algorithm alg3").code, 2);
  EXPECT_EQ(run("solve --problem " + d.string() + " --sigma 3").code, 2);
  EXPECT_EQ(run("bench --n 1").code, 2);
  EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, TraceFileHasOneRowPerIteration) {
  const auto d = worked_bundle();
  const auto trace = dir("trace_file");
  const auto r = run("solve --problem " + d.string() + " --algorithm alg1 --trace " + trace.string());
  ASSERT_EQ(r.code, 0) << r.out;
  std::ifstream in(trace);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "iteration,H,gap,d_norm,beta,branch");
}

TEST(Cli, GenerateSolveVerify) {
  const auto d = dir("generated");
  const auto sol = dir("generated_solution.json");
  auto r = run("generate --n 40 --density 0.2 --cond 10 --case easy --seed 5 --out " + d.string());
  ASSERT_EQ(r.code, 0) << r.out;
  r = run("solve --problem " + d.string() + " --solution " + sol.string());
  ASSERT_EQ(r.code, 0) << r.out;
  r = run("verify --problem " + d.string() + " --solution " + sol.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("verified"), std::string::npos);

  // A tampered objective fails verification.
  std::ofstream bad(sol);
  bad << "{\"objective\": 12345, \"x\": [0";
  for (int i = 1; i < 40; ++i) bad << ", 0";
  bad << "]}";
  bad.close();
  r = run("verify --problem " + d.string() + " --solution " + sol.string());
  EXPECT_EQ(r.code, 1) << r.out;
}

TEST(Cli, IntervalBundle) {
  const auto d = dir("ip");
  auto r = run("generate --n 30 --density 0.2 --seed 2 --ip --out " + d.string());
  ASSERT_EQ(r.code, 0) << r.out;
  r = run("solve --problem " + d.string());
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("objective "), std::string::npos);
}

TEST(Cli, BenchRows) {
  const auto r = run("bench --n 50 --density 0.1 --reps 2 --cond 10 --cases easy");
  EXPECT_EQ(r.code, 0) << r.out;
  std::size_t instance_rows = 0;
  for (std::size_t p = 0; (p = r.out.find("\ninstance,", p)) != std::string::npos; ++p) ++instance_rows;
  EXPECT_EQ(instance_rows, 4u);
}
