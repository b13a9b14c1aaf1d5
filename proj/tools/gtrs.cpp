// gtrs solve|generate|bench|verify
// Exit codes: 0 success, 1 solver failure, 2 input error.
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gtrs/bench.hpp"
#include "gtrs/error.hpp"
#include "gtrs/frontends.hpp"

using namespace gtrs;

namespace {

constexpr int kOk = 0, kSolverFailure = 1, kInputError = 2;

struct TolFlags {
  bool fast = false;
  std::optional<double> eps1, eps2, eps3, sigma, xi, s;
  std::optional<std::size_t> max_iter;

  void add(CLI::App* app) {
    app->add_flag("--fast", fast, "Relaxed tolerances (eps1=1e-5, eps2=1e-8, eps3=1e-5)");
    app->add_option("--eps1", eps1, "Relative equal-value band");
    app->add_option("--eps2", eps2, "Stop when H decreases by less than this");
    app->add_option("--eps3", eps3, "Stop when the descent direction is shorter than this");
    app->add_option("--sigma", sigma, "Armijo slope");
    app->add_option("--xi", xi, "Armijo initial step");
    app->add_option("--s", s, "Armijo backtracking factor");
    app->add_option("--max-iter", max_iter, "Iteration cap");
  }

  SolverConfig config() const {
    SolverConfig c = fast ? SolverConfig::fast() : SolverConfig{};
    if (eps1) c.eps1 = *eps1;
    if (eps2) c.eps2 = *eps2;
    if (eps3) {
      c.eps3 = *eps3;
      c.delta = *eps3;
    }
    if (sigma) c.sigma = *sigma;
    if (xi) c.xi = *xi;
    if (s) c.s = *s;
    if (max_iter) c.max_iter = *max_iter;
    c.validate();
    return c;
  }
};

// Without a preference, Alg2: its backtracking adapts to the local curvature.
Algorithm parse_algorithm(const std::string& s) {
  if (s == "alg1") return Algorithm::Alg1;
  if (s == "alg2" || s == "auto") return Algorithm::Alg2;
  fail(ErrorKind::InvalidInput, "unknown algorithm '" + s + "' (alg1, alg2, auto)");
}

std::vector<std::string> split(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

// A bad generator spec on the command line is the user's input, not a
// solver failure.
int input_error(const Error& e) {
  std::cerr << "error: invalid input: " << e.what() << '\n';
  return kInputError;
}

int report_error(const Error& e) {
  const bool input = e.kind() == ErrorKind::InvalidInput;
  std::cerr << "error: " << to_string(e.kind());
  if (!e.stage().empty()) std::cerr << " (stage " << e.stage() << ")";
  std::cerr << ": " << e.what() << '\n';
  return input ? kInputError : kSolverFailure;
}

void print_report(const SolveReport& r, const PipelineInfo& info) {
  std::printf("objective %.9f\n", r.objective);
  std::printf("residual %.3e\n", r.constraint_residual);
  std::printf("multiplier %.9g\n", r.multiplier);
  std::printf("case %s\n", to_string(r.case_tag));
  std::printf("iterations %zu\n", r.iterations);
  std::printf("termination %s\n", to_string(r.termination));
  if (r.theta) std::printf("theta %.9g\n", *r.theta);
  if (!info.provenance.empty()) std::printf("reformulation %s\n", info.provenance.c_str());
  std::printf("eig_time_seconds %.6f\n", info.eig_time);
  std::printf("solve_time_seconds %.6f\n", info.solve_time);
  std::printf("total_time_seconds %.6f\n", info.total_time);
  if (!r.note.empty()) std::printf("note %s\n", r.note.c_str());
}

void write_solution(const std::string& path, const SolveReport& r) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorKind::InvalidInput, path + ": cannot open for writing");
  char buf[40];
  auto real = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "{\n  \"objective\": " << real(r.objective) << ",\n  \"residual\": " << real(r.constraint_residual)
      << ",\n  \"multiplier\": " << real(r.multiplier) << ",\n  \"case\": \"" << to_string(r.case_tag)
      << "\",\n  \"x\": [";
  for (std::size_t i = 0; i < r.x.size(); ++i) out << (i ? ", " : "") << real(r.x[i]);
  out << "]\n}\n";
}

// ---------------------------------------------------------------------------

struct SolveArgs {
  std::string problem, trace, solution, algorithm = "auto";
  TolFlags tol;
};

int run_solve(const SolveArgs& a) {
  Bundle bundle;
  SolverConfig config;
  Algorithm alg;
  try {
    bundle = read_bundle(a.problem);
    config = a.tol.config();
    alg = parse_algorithm(a.algorithm);
  } catch (const Error& e) {
    return report_error(e);
  }
  std::ofstream trace;
  PipelineOptions opts;
  std::optional<TraceWriter> writer;
  if (!a.trace.empty()) {
    trace.open(a.trace);
    if (!trace) {
      std::cerr << "error: " << a.trace << ": cannot open for writing\n";
      return kInputError;
    }
    writer.emplace(trace);
    opts.observer = [&](const IterationRecord& r) { (*writer)(r); };
  }
  try {
    const PipelineResult res =
        bundle.ip ? solve_ip(*bundle.ip, config, alg, opts) : solve_auto(bundle.problem, config, alg, opts);
    print_report(res.report, res.info);
    if (!a.solution.empty()) write_solution(a.solution, res.report);
    return kOk;
  } catch (const Error& e) {
    return report_error(e);
  }
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::size_t n = 100;
  double density = 0.01, cond = 10.0;
  std::string kind = "easy", out;
  std::uint64_t seed = 1;
  bool ip = false;
};

int run_generate(const GenerateArgs& a) {
  InstanceSpec spec;
  try {
    spec = {a.n, a.density, a.cond, parse_instance_case(a.kind), a.seed};
    spec.validate();
  } catch (const Error& e) {
    return input_error(e);
  }
  try {
    const auto inst = generate_instance(spec);
    if (a.ip) {
      write_bundle(a.out, inst.ip);
    } else {
      write_bundle(a.out, inst.problem);
    }
    std::printf("wrote %s (n=%zu, %s, planted multiplier %.9g, interval end %.9g)\n", a.out.c_str(), a.n,
                to_string(spec.kind), inst.lambda_star, inst.boundary);
    return kOk;
  } catch (const Error& e) {
    return report_error(e);
  }
}

// ---------------------------------------------------------------------------

struct BenchArgs {
  std::size_t n = 1000;
  double density = 0.01;
  std::string conds = "10,100,1000", cases = "easy,hard1", algorithms = "alg1,alg2", output;
  std::size_t reps = 10, jobs = 1;
  std::uint64_t seed = 1;
  TolFlags tol;
};

int run_bench_cmd(const BenchArgs& a) {
  BenchOptions o;
  try {
    o.n = a.n;
    o.density = a.density;
    o.reps = a.reps;
    o.jobs = a.jobs;
    o.seed = a.seed;
    o.config = a.tol.config();
    o.conds.clear();
    for (const auto& c : split(a.conds)) {
      try {
        o.conds.push_back(std::stod(c));
      } catch (const std::exception&) {
        fail(ErrorKind::InvalidInput, "bad --cond entry '" + c + "'");
      }
    }
    o.cases.clear();
    for (const auto& c : split(a.cases)) o.cases.push_back(parse_instance_case(c));
    o.algorithms.clear();
    for (const auto& c : split(a.algorithms)) {
      require(c != "auto", ErrorKind::InvalidInput, "--algorithms takes alg1 and/or alg2");
      o.algorithms.push_back(parse_algorithm(c));
    }
    for (double c : o.conds) InstanceSpec{o.n, o.density, c, InstanceCase::Easy, 1}.validate();
  } catch (const Error& e) {
    return input_error(e);
  }
  try {
    const auto rows = run_bench(o);
    std::ofstream file;
    if (!a.output.empty()) {
      file.open(a.output);
      require(static_cast<bool>(file), ErrorKind::InvalidInput, a.output + ": cannot open for writing");
    }
    std::ostream& out = a.output.empty() ? std::cout : file;
    write_bench_csv(out, rows);
    std::size_t instances = 0, failed = 0;
    for (const auto& r : rows)
      if (r.row == "instance") {
        ++instances;
        failed += r.failed();
      }
    if (failed) std::cerr << failed << " of " << instances << " runs failed\n";
    return instances > 0 && failed == instances ? kSolverFailure : kOk;
  } catch (const Error& e) {
    return report_error(e);
  }
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string problem, solution;
  double tol = 1e-8;
};

int run_verify(const VerifyArgs& a) {
  Bundle bundle;
  Vec x;
  double reported = 0.0;
  try {
    bundle = read_bundle(a.problem);
    std::ifstream in(a.solution);
    require(static_cast<bool>(in), ErrorKind::InvalidInput, a.solution + ": file not found");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(in);
      reported = j.at("objective").get<double>();
      x = j.at("x").get<Vec>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::InvalidInput, a.solution + ": " + e.what());
    }
    const std::size_t n = bundle.ip ? bundle.ip->n() : bundle.problem.n();
    require(x.size() == n, ErrorKind::InvalidInput, a.solution + ": field 'x' has the wrong length");
    require(n <= kDenseLimit, ErrorKind::InvalidInput, "verify: the reference solver handles n <= 300");
  } catch (const Error& e) {
    return report_error(e);
  }

  try {
    double value, feas, f1;
    if (bundle.ip) {
      const auto& ip = *bundle.ip;
      const auto cls = classify_ip(ip);
      f1 = ip.A.quad(x) - 2.0 * dot(ip.a, x);
      const double bx = ip.B.quad(x);
      feas = std::max({ip.c1 - bx, bx - ip.c2, 0.0});
      value = cls.side == IpSide::Interior ? ip.A.quad(cls.x0) - 2.0 * dot(ip.a, cls.x0)
                                           : oracle_solve(ip_to_problem(ip, cls.side)).value;
    } else {
      const auto& p = bundle.problem;
      value = oracle_solve(p).value;
      f1 = p.f1.evaluate(x);
      const double f2 = p.f2.evaluate(x);
      feas = p.sense == ConstraintSense::Equality ? std::fabs(f2) : std::max(f2, 0.0);
    }
    const double scale = std::max(1.0, std::fabs(value));
    const double err_reported = std::fabs(reported - value) / scale;
    const double err_point = std::fabs(f1 - value) / scale;
    std::printf("reference %.12g\nreported %.12g\npoint_objective %.12g\nrelative_error %.3e\ninfeasibility %.3e\n",
                value, reported, f1, std::max(err_reported, err_point), feas);
    const bool ok = err_reported <= a.tol && err_point <= a.tol && feas <= a.tol;
    std::printf("%s\n", ok ? "verified" : "mismatch");
    return ok ? kOk : kSolverFailure;
  } catch (const Error& e) {
    return report_error(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generalized trust-region subproblem solver"};
  app.require_subcommand(1);

  SolveArgs sa;
  auto* solve = app.add_subcommand("solve", "Solve a problem bundle");
  solve->add_option("--problem", sa.problem, "Bundle directory (Q1.mtx, Q2.mtx, problem.json)")->required();
  solve->add_option("--algorithm", sa.algorithm, "alg1, alg2 or auto");
  solve->add_option("--trace", sa.trace, "Per-iteration CSV output");
  solve->add_option("--solution", sa.solution, "Write objective and x as JSON");
  sa.tol.add(solve);

  GenerateArgs ga;
  auto* gen = app.add_subcommand("generate", "Write a seeded random instance as a bundle");
  gen->add_option("--n", ga.n, "Dimension");
  gen->add_option("--density", ga.density, "Target density");
  gen->add_option("--cond", ga.cond, "Condition number of the objective Hessian");
  gen->add_option("--case", ga.kind, "easy, hard1 or hard2");
  gen->add_option("--seed", ga.seed, "Seed");
  gen->add_flag("--ip", ga.ip, "Write the interval-constrained form");
  gen->add_option("--out", ga.out, "Output directory")->required();

  BenchArgs ba;
  auto* bench = app.add_subcommand("bench", "Benchmark sweep, CSV on standard output");
  bench->add_option("--n", ba.n, "Dimension");
  bench->add_option("--density", ba.density, "Target density");
  bench->add_option("--cond", ba.conds, "Comma-separated condition numbers");
  bench->add_option("--cases", ba.cases, "Comma-separated cases (easy, hard1, hard2)");
  bench->add_option("--reps", ba.reps, "Instances per cell");
  bench->add_option("--algorithms", ba.algorithms, "Comma-separated algorithms (alg1, alg2)");
  bench->add_option("--seed", ba.seed, "Base seed");
  bench->add_option("--jobs", ba.jobs, "Concurrent instances");
  bench->add_option("--output", ba.output, "CSV file instead of standard output");
  ba.tol.add(bench);

  VerifyArgs va;
  auto* verify = app.add_subcommand("verify", "Check a reported solution against the dense reference");
  verify->add_option("--problem", va.problem, "Bundle directory")->required();
  verify->add_option("--solution", va.solution, "Solution JSON written by solve --solution")->required();
  verify->add_option("--tol", va.tol, "Relative objective and feasibility tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  if (*solve) return run_solve(sa);
  if (*gen) return run_generate(ga);
  if (*bench) return run_bench_cmd(ba);
  return run_verify(va);
}
