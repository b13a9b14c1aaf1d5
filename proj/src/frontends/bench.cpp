#include "gtrs/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

#include "gtrs/error.hpp"

namespace gtrs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Shortest text that parses back to the same double.
std::string real(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_real(const std::string& s, std::size_t line) {
  if (s.empty()) return kNaN;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::InvalidInput, "bench CSV line " + std::to_string(line) + ": bad number '" + s + "'");
}

std::uint64_t parse_uint(const std::string& s, std::size_t line) {
  if (s.empty()) return 0;
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    fail(ErrorKind::InvalidInput, "bench CSV line " + std::to_string(line) + ": bad integer '" + s + "'");
  return v;
}

struct Task {
  std::size_t cond_index, case_index, rep;
};

}  // namespace

std::uint64_t bench_instance_seed(std::uint64_t base, std::size_t cond_index, std::size_t case_index,
                                  std::size_t rep) {
  // splitmix64 over the position
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (1 + rep + 1000 * case_index + 1000000 * cond_index);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<BenchRecord> run_bench(const BenchOptions& o) {
  require(o.reps > 0, ErrorKind::InvalidInput, "bench: --reps must be positive");
  require(!o.conds.empty() && !o.cases.empty() && !o.algorithms.empty(), ErrorKind::InvalidInput,
          "bench: empty sweep");
  o.config.validate();
  InstanceSpec probe{o.n, o.density, o.conds.front(), o.cases.front(), 1};
  probe.validate();
  for (double c : o.conds) require(c >= 1.0, ErrorKind::InvalidInput, "bench: cond must be >= 1");

  std::vector<Task> tasks;
  for (std::size_t ci = 0; ci < o.conds.size(); ++ci)
    for (std::size_t k = 0; k < o.cases.size(); ++k)
      for (std::size_t r = 0; r < o.reps; ++r) tasks.push_back({ci, k, r});

  const std::size_t per_task = o.algorithms.size();
  std::vector<BenchRecord> rows(tasks.size() * per_task);

  auto run_task = [&](std::size_t t) {
    const Task& task = tasks[t];
    InstanceSpec spec{o.n, o.density, o.conds[task.cond_index], o.cases[task.case_index],
                      bench_instance_seed(o.seed, task.cond_index, task.case_index, task.rep)};
    std::optional<GeneratedInstance> inst;
    try {
      inst = generate_instance(spec);
    } catch (const Error&) {
    }
    for (std::size_t a = 0; a < per_task; ++a) {
      BenchRecord& r = rows[t * per_task + a];
      r.n = spec.n;
      r.density = spec.density;
      r.cond = spec.cond;
      r.case_tag = to_string(spec.kind);
      r.seed = spec.seed;
      r.algorithm = to_string(o.algorithms[a]);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        if (!inst) throw Error(ErrorKind::Numerical, "instance generation failed");
        const auto res = solve_auto(inst->problem, o.config, o.algorithms[a]);
        r.iterations = static_cast<double>(res.report.iterations);
        r.eig_time_seconds = res.info.eig_time;
        r.objective = res.report.objective;
        r.residual = res.report.constraint_residual;
        r.termination = to_string(res.report.termination);
      } catch (const Error&) {
        r.iterations = 0.0;
        r.eig_time_seconds = 0.0;
        r.objective = kNaN;
        r.residual = kNaN;
        r.termination = "failed";
      }
      r.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };

  const std::size_t jobs = std::max<std::size_t>(1, std::min(o.jobs, tasks.size()));
  if (jobs == 1) {
    for (std::size_t t = 0; t < tasks.size(); ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (std::size_t j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) run_task(t);
      });
    for (auto& th : pool) th.join();
  }

  // Interleave the summary rows; instances of a cell are contiguous per algorithm.
  std::vector<BenchRecord> out;
  const std::size_t cell = o.reps * per_task;
  for (std::size_t begin = 0; begin < rows.size(); begin += cell) {
    for (std::size_t i = begin; i < begin + cell; ++i) out.push_back(rows[i]);
    for (std::size_t a = 0; a < per_task; ++a) {
      BenchRecord s = rows[begin + a];
      s.row = "summary";
      s.seed = 0;
      s.objective = kNaN;
      std::size_t ok = 0;
      double it = 0.0, wall = 0.0, eig = 0.0, res = 0.0;
      for (std::size_t r = 0; r < o.reps; ++r) {
        const BenchRecord& x = rows[begin + r * per_task + a];
        if (x.failed()) continue;
        ++ok;
        it += x.iterations;
        wall += x.wall_time_seconds;
        eig += x.eig_time_seconds;
        res = std::max(res, std::fabs(x.residual));
      }
      const double k = ok ? static_cast<double>(ok) : kNaN;
      s.iterations = it / k;
      s.wall_time_seconds = wall / k;
      s.eig_time_seconds = eig / k;
      s.residual = ok ? res : kNaN;
      s.termination = "ok=" + std::to_string(ok) + "/" + std::to_string(o.reps);
      out.push_back(std::move(s));
    }
  }
  return out;
}

const std::vector<std::string>& bench_columns() {
  static const std::vector<std::string> cols{"row", "n", "density", "cond", "case", "seed", "algorithm",
                                             "iterations", "wall_time_seconds", "eig_time_seconds",
                                             "objective", "residual", "termination"};
  return cols;
}

void write_bench_header(std::ostream& out) {
  const auto& c = bench_columns();
  for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << c[i];
  out << '\n';
}

void write_bench_row(std::ostream& out, const BenchRecord& r) {
  out << r.row << ',' << r.n << ',' << real(r.density) << ',' << real(r.cond) << ',' << r.case_tag << ','
      << (r.seed ? std::to_string(r.seed) : "") << ',' << r.algorithm << ',' << real(r.iterations) << ','
      << real(r.wall_time_seconds) << ',' << real(r.eig_time_seconds) << ',' << real(r.objective) << ','
      << real(r.residual) << ',' << r.termination << '\n';
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& rows) {
  write_bench_header(out);
  for (const auto& r : rows) write_bench_row(out, r);
}

std::vector<BenchRecord> parse_bench_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::InvalidInput, "bench CSV: missing header");
  std::ostringstream expect;
  write_bench_header(expect);
  require(line + "\n" == expect.str(), ErrorKind::InvalidInput, "bench CSV: unexpected header '" + line + "'");
  std::vector<BenchRecord> rows;
  for (std::size_t no = 2; std::getline(in, line); ++no) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (!line.empty() && line.back() == ',') f.emplace_back();
    require(f.size() == bench_columns().size(), ErrorKind::InvalidInput,
            "bench CSV line " + std::to_string(no) + ": expected " + std::to_string(bench_columns().size()) +
                " fields, got " + std::to_string(f.size()));
    BenchRecord r;
    r.row = f[0];
    require(r.row == "instance" || r.row == "summary", ErrorKind::InvalidInput,
            "bench CSV line " + std::to_string(no) + ": bad row kind '" + r.row + "'");
    r.n = parse_uint(f[1], no);
    r.density = parse_real(f[2], no);
    r.cond = parse_real(f[3], no);
    r.case_tag = f[4];
    r.seed = parse_uint(f[5], no);
    r.algorithm = f[6];
    r.iterations = parse_real(f[7], no);
    r.wall_time_seconds = parse_real(f[8], no);
    r.eig_time_seconds = parse_real(f[9], no);
    r.objective = parse_real(f[10], no);
    r.residual = parse_real(f[11], no);
    r.termination = f[12];
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace gtrs
