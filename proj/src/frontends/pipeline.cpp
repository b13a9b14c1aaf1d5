#include <chrono>
#include <cmath>

#include "gtrs/error.hpp"
#include "gtrs/frontends.hpp"

namespace gtrs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <class F>
auto staged(const char* stage, F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (Error& e) {
    if (e.stage().empty()) e.set_stage(stage);
    throw;
  }
}

void refresh_values(const GtrsProblem& p, SolveReport& r) {
  r.objective = p.f1.evaluate(r.x);
  r.constraint_residual = p.f2.evaluate(r.x);
}

}  // namespace

PipelineResult solve_auto(const GtrsProblem& problem, const SolverConfig& config, Algorithm algorithm,
                          const PipelineOptions& options) {
  const auto t_start = Clock::now();
  PipelineResult res;
  PipelineInfo& info = res.info;
  SolveReport& report = res.report;

  staged("validate", [&] {
    problem.validate();
    config.validate();
  });

  const auto t_eig = Clock::now();
  info.lambda0 = staged("find_lambda0", [&] { return find_lambda0(problem).lambda0; });
  info.interval = staged("compute_interval", [&] { return compute_interval(problem, info.lambda0); });
  staged("compute_interval", [&] {
    require(info.interval.condition != IntervalCondition::Singleton, ErrorKind::Unsupported,
            "multiplier interval is a single point");
    require(info.interval.condition != IntervalCondition::Empty, ErrorKind::Unbounded,
            "problem is unbounded below");
  });

  bool solved = false;
  if (options.hard_case_screen) {
    staged("hard_case_screen", [&] {
      for (Boundary b : {Boundary::Right, Boundary::Left}) {
        if (auto r = hard_case2_attempt(problem, info.interval, b)) {
          report = std::move(*r);
          info.provenance = b == Boundary::Right ? "hard case 2 at the right endpoint"
                                                 : "hard case 2 at the left endpoint";
          solved = true;
          return;
        }
      }
    });
  }

  Reformulation reform;
  if (!solved) {
    reform = staged("build_reformulation",
                    [&] { return build_reformulation(problem, info.interval, options.gamma_split); });
    info.variant = reform.variant;
    info.L = reform.L;
    info.provenance = reform.provenance;
  }
  info.eig_time = seconds_since(t_eig);

  const auto t_solve = Clock::now();
  if (!solved) {
    const std::size_t n = problem.n();
    Vec x0(n, 0.0);
    if (options.warm_start && reform.variant != ReformVariant::Interior)
      x0 = staged("warm_start", [&] { return gamma_eval(problem, info.lambda0).x; });

    switch (reform.variant) {
      case ReformVariant::Interior:
        report.x = reform.x_interior;
        report.case_tag = CaseTag::Interior;
        report.termination = Termination::Construction;
        report.multiplier = 0.0;
        refresh_values(problem, report);
        report.minimax_value = report.objective;
        break;
      case ReformVariant::TwoConvex: {
        auto m = staged("minimize", [&] { return minimize(reform, x0, config, algorithm, options.observer); });
        report = staged("recover_solution", [&] { return recover_solution(problem, reform, m.x, config.eps1); });
        report.iterations = m.iterations;
        report.termination = m.termination;
        info.h_trace = std::move(m.h_trace);
        break;
      }
      case ReformVariant::ConvexConstraint: {
        auto p = staged("solve_p2", [&] { return solve_p2(reform, x0, config); });
        report = staged("recover_solution",
                        [&] { return recover_convex_constraint(problem, reform, p.x, p.multiplier); });
        report.iterations = p.iterations;
        report.termination = p.termination;
        break;
      }
      case ReformVariant::UnsupportedSingleton:
        staged("build_reformulation",
               [&] { fail(ErrorKind::Unsupported, "multiplier interval is a single point"); });
    }
  }

  const bool active = problem.sense == ConstraintSense::Equality || report.multiplier > 0.0 ||
                      report.constraint_residual > 0.0;
  report.x = staged("newton_refine", [&] { return newton_refine(problem, report.x, active); });
  refresh_values(problem, report);
  info.solve_time = seconds_since(t_solve);
  info.total_time = seconds_since(t_start);
  return res;
}

PipelineResult solve_ip(const IntervalProblem& ip, const SolverConfig& config, Algorithm algorithm,
                        const PipelineOptions& options) {
  const auto t0 = Clock::now();
  const IpClassification cls = staged("classify_ip", [&] { return classify_ip(ip); });
  if (cls.side != IpSide::Interior) {
    const GtrsProblem p = staged("classify_ip", [&] { return ip_to_problem(ip, cls.side); });
    PipelineResult r = solve_auto(p, config, algorithm, options);
    r.info.provenance = std::string(to_string(cls.side)) + "; " + r.info.provenance;
    return r;
  }
  PipelineResult r;
  r.report.x = cls.x0;
  r.report.case_tag = CaseTag::Interior;
  r.report.termination = Termination::Construction;
  // Objective in the one-sided scaling: x^T A x - 2 a^T x.
  r.report.objective = ip.A.quad(cls.x0) - 2.0 * dot(ip.a, cls.x0);
  r.report.minimax_value = r.report.objective;
  r.report.constraint_residual = 0.0;
  r.info.variant = ReformVariant::Interior;
  r.info.provenance = to_string(IpSide::Interior);
  r.info.total_time = seconds_since(t0);
  return r;
}

}  // namespace gtrs
