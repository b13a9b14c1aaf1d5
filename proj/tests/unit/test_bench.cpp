#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "gtrs/bench.hpp"
#include "gtrs/error.hpp"

using namespace gtrs;

namespace {

BenchOptions small(std::size_t reps = 2) {
  BenchOptions o;
  o.n = 60;
  o.density = 0.1;
  o.conds = {10.0};
  o.cases = {InstanceCase::Easy};
  o.reps = reps;
  return o;
}

std::size_t count(const std::vector<BenchRecord>& rows, const std::string& kind) {
  std::size_t k = 0;
  for (const auto& r : rows) k += r.row == kind;
  return k;
}

std::string without_times(const std::vector<BenchRecord>& rows) {
  std::ostringstream s;
  for (auto r : rows) {
    r.wall_time_seconds = r.eig_time_seconds = 0.0;
    write_bench_row(s, r);
  }
  return s.str();
}

}  // namespace

TEST(Bench, RowCountArithmetic) {
  const auto rows = run_bench(small());
  EXPECT_EQ(count(rows, "instance"), 4u);  // 2 instances x 2 algorithms
  EXPECT_EQ(count(rows, "summary"), 2u);
  EXPECT_EQ(rows.back().row, "summary");
  for (const auto& r : rows) {
    EXPECT_FALSE(r.failed());
    EXPECT_GE(r.wall_time_seconds, 0.0);
    if (r.row == "instance") {
      EXPECT_GE(r.iterations, 1.0);
    }
  }
}

TEST(Bench, FixedSeedIsDeterministicExceptTimes) {
  auto o = small();
  const auto a = run_bench(o);
  o.jobs = 3;
  const auto b = run_bench(o);
  EXPECT_EQ(without_times(a), without_times(b));
}

TEST(Bench, CsvRoundTrip) {
  auto rows = run_bench(small(1));
  rows[0].termination = "failed";
  rows[0].objective = std::nan("");
  std::stringstream s;
  write_bench_csv(s, rows);
  const auto back = parse_bench_csv(s);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back[i].row, rows[i].row);
    EXPECT_EQ(back[i].n, rows[i].n);
    EXPECT_EQ(back[i].density, rows[i].density);
    EXPECT_EQ(back[i].seed, rows[i].seed);
    EXPECT_EQ(back[i].iterations, rows[i].iterations);
    EXPECT_EQ(back[i].wall_time_seconds, rows[i].wall_time_seconds);
    EXPECT_EQ(std::isnan(back[i].objective), std::isnan(rows[i].objective));
    if (!std::isnan(rows[i].objective)) EXPECT_EQ(back[i].objective, rows[i].objective);
    EXPECT_EQ(back[i].termination, rows[i].termination);
  }
  std::ostringstream again;
  write_bench_csv(again, back);
  EXPECT_EQ(again.str(), s.str());
}

TEST(Bench, ParserRejectsMalformedInput) {
  std::istringstream bad_header("n,density\n");
  EXPECT_THROW(parse_bench_csv(bad_header), Error);
  std::ostringstream s;
  write_bench_header(s);
  std::istringstream short_row(s.str() + "instance,10,0.1\n");
  EXPECT_THROW(parse_bench_csv(short_row), Error);
  std::istringstream bad_number(s.str() + "instance,10,x,10,easy,1,alg1,3,0,0,1,0,ok\n");
  EXPECT_THROW(parse_bench_csv(bad_number), Error);
}

TEST(Bench, IterationsGrowWithConditionNumber) {
  auto o = small(3);
  o.n = 200;
  o.density = 0.05;
  o.conds = {10.0, 1000.0};
  o.algorithms = {Algorithm::Alg1};
  const auto rows = run_bench(o);
  std::vector<double> means;
  for (const auto& r : rows)
    if (r.row == "summary") means.push_back(r.iterations);
  ASSERT_EQ(means.size(), 2u);
  EXPECT_GE(means[1], means[0]);
}

TEST(Bench, SeedsDependOnPositionOnly) {
  EXPECT_EQ(bench_instance_seed(5, 1, 2, 3), bench_instance_seed(5, 1, 2, 3));
  EXPECT_NE(bench_instance_seed(5, 1, 2, 3), bench_instance_seed(5, 1, 2, 4));
  EXPECT_NE(bench_instance_seed(5, 1, 2, 3), bench_instance_seed(6, 1, 2, 3));
}

TEST(Bench, InvalidOptions) {
  auto o = small();
  o.reps = 0;
  EXPECT_THROW(run_bench(o), Error);
  o = small();
  o.conds = {0.5};
  EXPECT_THROW(run_bench(o), Error);
}
