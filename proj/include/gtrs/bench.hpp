#pragma once

// Benchmark sweeps over generated instances and their CSV form.
//
// Columns, in order:
//   row,n,density,cond,case,seed,algorithm,iterations,wall_time_seconds,
//   eig_time_seconds,objective,residual,termination
// `row` is "instance" or "summary". A summary row closes each
// (cond, case, algorithm) cell: iterations and times are means over the
// cell's successful instances, residual is the largest |residual|, seed and
// objective are empty and termination reads "ok=<k>/<m>".

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gtrs/frontends.hpp"

namespace gtrs {

struct BenchRecord {
  std::string row = "instance";
  std::size_t n = 0;
  double density = 0.0;
  double cond = 0.0;
  std::string case_tag;
  std::uint64_t seed = 0;  // 0 on summary rows
  std::string algorithm;
  double iterations = 0.0;
  double wall_time_seconds = 0.0;
  double eig_time_seconds = 0.0;
  double objective = 0.0;  // NaN when absent
  double residual = 0.0;
  std::string termination;  // a Termination name, "failed", or "ok=k/m"

  bool failed() const { return termination == "failed"; }
};

struct BenchOptions {
  std::size_t n = 1000;
  double density = 0.01;
  std::vector<double> conds{10.0, 100.0, 1000.0};
  std::vector<InstanceCase> cases{InstanceCase::Easy, InstanceCase::Hard1};
  std::size_t reps = 10;
  std::vector<Algorithm> algorithms{Algorithm::Alg1, Algorithm::Alg2};
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  SolverConfig config;
};

/// Seed of one instance in a sweep; depends only on the base seed and the
/// instance's position.
std::uint64_t bench_instance_seed(std::uint64_t base, std::size_t cond_index, std::size_t case_index,
                                  std::size_t rep);

/// Instance rows in (cond, case, rep, algorithm) order, each cell followed by
/// its summary row. Failures are recorded in-row.
std::vector<BenchRecord> run_bench(const BenchOptions& options);

const std::vector<std::string>& bench_columns();
void write_bench_header(std::ostream& out);
void write_bench_row(std::ostream& out, const BenchRecord& r);
void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& rows);
/// Throws InvalidInput on a wrong header or malformed row.
std::vector<BenchRecord> parse_bench_csv(std::istream& in);

}  // namespace gtrs
