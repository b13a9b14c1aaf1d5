#pragma once

// Problem model and orchestration around the solver core: the two-sided
// (interval) constraint form, seeded instance generation, the dense
// reference solver, the end-to-end pipeline, and problem bundles on disk.

#include <filesystem>
#include <optional>
#include <string>

#include "gtrs/recovery.hpp"

namespace gtrs {

/// min x^T A x - 2 a^T x  subject to  c1 <= x^T B x <= c2
struct IntervalProblem {
  SparseSymmetric A;
  Vec a;
  SparseSymmetric B;
  double c1 = 0.0;
  double c2 = 0.0;

  std::size_t n() const noexcept { return A.n(); }
};

enum class IpSide { LowerActive, Interior, UpperActive };
const char* to_string(IpSide s);

struct IpClassification {
  IpSide side = IpSide::Interior;
  Vec x0;               // unconstrained minimiser A^{-1} a
  double value = 0.0;   // x0^T B x0
};

/// Decides which side of the interval constraint can be active.
IpClassification classify_ip(const IntervalProblem& ip);

/// The one-sided problem for an active side (Interior is rejected).
GtrsProblem ip_to_problem(const IntervalProblem& ip, IpSide side);

enum class InstanceCase { Easy, Hard1, Hard2 };
const char* to_string(InstanceCase c);
InstanceCase parse_instance_case(const std::string& s);

struct InstanceSpec {
  std::size_t n = 100;
  double density = 0.01;
  double cond = 10.0;
  InstanceCase kind = InstanceCase::Easy;
  std::uint64_t seed = 1;
  void validate() const;
};

struct GeneratedInstance {
  IntervalProblem ip;      // A SPD with the requested condition number, B indefinite
  GtrsProblem problem;     // the upper-active one-sided form of ip
  double lambda_star = 0.0;  // planted multiplier
  Vec x_star;                // planted solution
  double boundary = 0.0;     // right end of the multiplier interval
  Vec boundary_null;         // null vector of Q1 + boundary Q2
};

/// Plants a KKT point with multiplier lambda_star in the multiplier interval:
/// Easy away from its end, Hard1 close to it, Hard2 exactly at it with the
/// linear term orthogonal to the null vector. Same spec, same instance.
GeneratedInstance generate_instance(const InstanceSpec& spec);

struct OracleResult {
  double value = 0.0;
  Vec x;
  double multiplier = 0.0;
  bool hard_case = false;
};

/// Dense reference solution (n <= 300) by bisection on the constraint value
/// along the pencil, independent of the iterative code paths.
OracleResult oracle_solve(const GtrsProblem& problem, double tol = 1e-13);

struct PipelineOptions {
  bool gamma_split = false;
  bool hard_case_screen = true;
  bool warm_start = false;  // start the minimax at the stationary point for lambda0
  IterationObserver observer;
};

struct PipelineInfo {
  double lambda0 = 0.0;
  PencilInterval interval;
  ReformVariant variant = ReformVariant::TwoConvex;
  double L = 0.0;
  std::string provenance;
  double eig_time = 0.0;    // lambda0, interval and L
  double solve_time = 0.0;  // minimax, recovery and refinement
  double total_time = 0.0;
  std::vector<double> h_trace;
};

struct PipelineResult {
  SolveReport report;
  PipelineInfo info;
};

/// validate -> lambda0 -> interval -> hard-case screen -> reformulation ->
/// minimax (or projected gradient) -> recovery -> Newton refinement.
/// Errors carry the stage they came from.
PipelineResult solve_auto(const GtrsProblem& problem, const SolverConfig& config, Algorithm algorithm,
                          const PipelineOptions& options = {});

/// Interval problem: classify, return x0 when interior, else solve the
/// active one-sided problem.
PipelineResult solve_ip(const IntervalProblem& ip, const SolverConfig& config, Algorithm algorithm,
                        const PipelineOptions& options = {});

struct Bundle {
  GtrsProblem problem;                // unused for "ip" bundles
  std::optional<IntervalProblem> ip;  // present for "ip" bundles
};

/// Directory with Q1.mtx, Q2.mtx and problem.json. For "ip" bundles Q1/Q2
/// hold A/B and b1 holds a.
Bundle read_bundle(const std::filesystem::path& dir);
void write_bundle(const std::filesystem::path& dir, const GtrsProblem& problem);
void write_bundle(const std::filesystem::path& dir, const IntervalProblem& ip);

}  // namespace gtrs
