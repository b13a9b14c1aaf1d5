#include "gtrs/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gtrs/error.hpp"
#include "gtrs/linalg.hpp"

namespace gtrs {

const char* to_string(CaseTag c) {
  switch (c) {
    case CaseTag::EasyOrHard1: return "easy-or-hard1";
    case CaseTag::Hard2: return "hard2";
    case CaseTag::Interior: return "interior";
  }
  return "unknown";
}

namespace {

// Root of a theta^2 + b theta + c = 0 with the smaller magnitude; nullopt when
// the roots are complex beyond rounding.
std::optional<double> small_root(double a, double b, double c) {
  if (!(a > 0.0)) return std::nullopt;
  double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) {
    if (disc < -1e-12 * (b * b + std::fabs(4.0 * a * c))) return std::nullopt;
    disc = 0.0;
  }
  const double sq = std::sqrt(disc);
  const double q = -0.5 * (b + (b >= 0.0 ? sq : -sq));
  if (q == 0.0) return 0.0;
  const double r1 = q / a, r2 = c / q;
  return std::fabs(r1) <= std::fabs(r2) ? r1 : r2;
}

// Coefficients of theta -> h(x + theta v) - target.
struct LineQuadratic {
  double a, b, c;
};

LineQuadratic along(const QuadraticForm& h, std::span<const double> x, std::span<const double> v, double target) {
  const Vec hv = h.Q.multiply(v);
  const Vec g = h.gradient(x);
  return {0.5 * dot(v, hv), dot(v, g), h.evaluate(x) - target};
}

void fill_values(const GtrsProblem& p, SolveReport& r) {
  r.objective = p.f1.evaluate(r.x);
  r.constraint_residual = p.f2.evaluate(r.x);
}

}  // namespace

std::vector<Vec> hessian_null_basis(const QuadraticForm& h, const Vec& hint, double tol) {
  if (!hint.empty()) return {hint};
  return null_space_basis(h.Q, tol);
}

SolveReport recover_solution(const GtrsProblem& problem, const Reformulation& reform, std::span<const double> x_m,
                             double eps1) {
  require(reform.variant == ReformVariant::TwoConvex, ErrorKind::Precondition,
          "recover_solution needs a two-convex reformulation");
  SolveReport out;
  out.x.assign(x_m.begin(), x_m.end());
  const double hl = reform.h_left.evaluate(x_m), hr = reform.h_right.evaluate(x_m);
  const double t = std::max(hl, hr);
  out.minimax_value = t;

  if (values_equal(hl, hr, eps1)) {
    const Vec gl = reform.h_left.gradient(x_m), gr = reform.h_right.gradient(x_m);
    const double alpha = steepest_direction(gl, gr, true, hl >= hr, 0.0).alpha;
    out.multiplier = alpha * reform.lambda_left + (1.0 - alpha) * reform.lambda_right;
    fill_values(problem, out);
    return out;
  }

  const bool left_active = hl > hr;
  const double lam_active = left_active ? reform.lambda_left : reform.lambda_right;
  out.multiplier = lam_active;
  if (left_active && reform.lambda_left == 0.0 && reform.sense == ConstraintSense::Inequality) {
    // f1 itself is minimal and the constraint holds strictly.
    fill_values(problem, out);
    return out;
  }

  const QuadraticForm& act = left_active ? reform.h_left : reform.h_right;
  const QuadraticForm& oth = left_active ? reform.h_right : reform.h_left;
  const auto basis = hessian_null_basis(act, left_active ? reform.null_left : reform.null_right);
  const double gap = std::fabs(hl - hr);
  if (basis.empty()) {
    if (gap <= 1e-6 * (1.0 + std::fabs(t))) {
      out.note = "no null direction; values within 1e-6, kept the minimax point";
      fill_values(problem, out);
      return out;
    }
    fail(ErrorKind::Numerical, "recovery: active Hessian has no null direction although the values differ by " +
                                   std::to_string(gap) + " (minimax point not optimal to tolerance)");
  }
  const Vec& v = basis.front();
  const auto q = along(oth, x_m, v, t);
  const auto theta = small_root(q.a, q.b, q.c);
  if (!theta) {
    fail(ErrorKind::Numerical, "recovery: null direction does not reach the other level (curvature " +
                                   std::to_string(q.a) + ")");
  }
  Vec x = out.x;
  axpy(*theta, v, x);
  // A null direction that is not flat for the active side (gradient not yet
  // orthogonal to it) would raise H; keep the minimax point then.
  const double h_new = std::max(reform.h_left.evaluate(x), reform.h_right.evaluate(x));
  if (h_new > t + 1e-8 * (1.0 + std::fabs(t))) {
    out.note = "null step raised the minimax value; kept the minimax point";
    fill_values(problem, out);
    return out;
  }
  out.x = std::move(x);
  out.theta = *theta;
  out.recovery_direction_used = true;
  fill_values(problem, out);
  return out;
}

SolveReport recover_convex_constraint(const GtrsProblem& problem, const Reformulation& reform,
                                      std::span<const double> x, double constraint_multiplier) {
  require(reform.variant == ReformVariant::ConvexConstraint, ErrorKind::Precondition,
          "recover_convex_constraint needs a convex-constraint reformulation");
  SolveReport out;
  out.x.assign(x.begin(), x.end());
  out.multiplier = reform.lambda_left + constraint_multiplier;
  out.minimax_value = reform.h_left.evaluate(x);
  const double f2 = problem.f2.evaluate(x);
  const double tol = 1e-10 * (1.0 + std::fabs(problem.f2.c));
  if (f2 < -tol && reform.lambda_left > 0.0) {
    const auto basis = hessian_null_basis(reform.h_left, reform.null_left);
    if (!basis.empty()) {
      const Vec& v = basis.front();
      const auto q = along(problem.f2, x, v, 0.0);
      if (const auto theta = small_root(q.a, q.b, q.c)) {
        axpy(*theta, v, out.x);
        out.theta = *theta;
        out.recovery_direction_used = true;
      }
    }
  }
  fill_values(problem, out);
  return out;
}

Vec newton_refine(const GtrsProblem& problem, std::span<const double> x, bool active) {
  Vec out(x.begin(), x.end());
  if (!active) return out;
  const double f = problem.f2.evaluate(x);
  if (f == 0.0) return out;
  const Vec g = problem.f2.gradient(x);
  const double gg = dot(g, g);
  const double scale = 1.0 + problem.f2.Q.norm_inf() * norm_inf(x) + norm_inf(problem.f2.b);
  if (std::sqrt(gg) <= 1e-14 * scale) return out;
  Vec trial = out;
  axpy(-f / gg, g, trial);
  if (std::fabs(problem.f2.evaluate(trial)) >= std::fabs(f)) return out;
  return trial;
}

std::optional<HardCase2Point> hard_case2_point(const QuadraticForm& hi, const QuadraticForm& hj,
                                               const std::vector<Vec>& basis, bool raise,
                                               std::shared_ptr<const Preconditioner> precond) {
  if (basis.empty() || basis.front().empty()) return std::nullopt;
  const std::size_t n = hi.n();

  // Hard case: the linear term has no component in the null space.
  const double a_norm = norm2(hi.b);
  Vec rhs(hi.b.begin(), hi.b.end());
  for (const auto& v : basis) {
    const double c = dot(v, hi.b);
    if (std::fabs(c) > 1e-8 * a_norm) return std::nullopt;
    axpy(-c, v, rhs);
  }
  simd::scal(-1.0, rhs);

  // Minimum-norm minimiser of h_i: CG on A_i + s V V^T, which is definite and
  // agrees with A_i on the range.
  const double shift = std::max(1.0, hi.Q.norm_inf());
  Operator op = [&](std::span<const double> x, std::span<double> y) {
    hi.Q.multiply(x, y);
    for (const auto& v : basis) axpy(shift * dot(v, x), v, y);
  };
  Operator pre;
  if (precond) pre = precond->as_operator();
  const Vec xhat = pcg_solve(op, rhs, 1e-12, 20 * n + 200, precond ? &pre : nullptr);
  const double t = hi.evaluate(xhat);

  // Minimise h_j over xhat + V alpha (closed form, k x k).
  const std::size_t k = basis.size();
  DenseMatrix m(k, k);
  Vec r(k);
  const Vec gj = hj.gradient(xhat);
  std::vector<Vec> av;
  for (const auto& v : basis) av.push_back(hj.Q.multiply(v));
  for (std::size_t p = 0; p < k; ++p) {
    r[p] = -dot(basis[p], gj);
    for (std::size_t q = 0; q < k; ++q) m(p, q) = dot(basis[p], av[q]);
  }
  const auto chol = CholeskyFactor::factor(m, 0.0);
  if (!chol) return std::nullopt;
  chol->solve(r);
  HardCase2Point out;
  out.x = xhat;
  for (std::size_t p = 0; p < k; ++p) axpy(r[p], basis[p], out.x);
  if (hj.evaluate(out.x) > t + 1e-10 * (1.0 + std::fabs(t))) return std::nullopt;
  out.value = t;
  if (raise) {
    // Lift h_j to t so both values meet.
    const auto q = along(hj, out.x, basis.front(), t);
    if (const auto theta = small_root(q.a, q.b, std::min(q.c, 0.0))) {
      axpy(*theta, basis.front(), out.x);
      out.theta = *theta;
    }
  }
  return out;
}

std::optional<SolveReport> hard_case2_attempt(const GtrsProblem& problem, const PencilInterval& interval,
                                              Boundary boundary) {
  if (interval.condition != IntervalCondition::TwoSided) return std::nullopt;
  const bool left = boundary == Boundary::Left;
  if (left && interval.clamped) return std::nullopt;  // Q1 itself is definite there
  const double lam = left ? interval.lambda1 : interval.lambda2;
  const double lam_other = left ? interval.lambda2 : interval.working_left();
  const QuadraticForm hi = combine(problem.f1, lam, problem.f2);
  const QuadraticForm hj = combine(problem.f1, lam_other, problem.f2);

  std::vector<Vec> basis;
  if (left ? interval.left_multiple : interval.right_multiple) {
    basis = null_space_basis(hi.Q, 1e-8, interval.q0_precond);
  } else {
    basis = {left ? interval.v_left : interval.v_right};
  }
  const bool raise = !(lam == 0.0 && problem.sense == ConstraintSense::Inequality);
  auto pt = hard_case2_point(hi, hj, basis, raise, interval.q0_precond);
  if (!pt) return std::nullopt;

  SolveReport out;
  out.case_tag = CaseTag::Hard2;
  out.termination = Termination::Construction;
  out.multiplier = lam;
  out.minimax_value = pt->value;
  out.theta = pt->theta;
  out.recovery_direction_used = pt->theta.has_value();
  out.x = std::move(pt->x);
  fill_values(problem, out);
  return out;
}

}  // namespace gtrs
