#include "gtrs/cqr.hpp"

#include <algorithm>
#include <cmath>

#include "gtrs/error.hpp"
#include "gtrs/linalg.hpp"

namespace gtrs {

const char* to_string(ReformVariant v) {
  switch (v) {
    case ReformVariant::TwoConvex: return "two-convex";
    case ReformVariant::ConvexConstraint: return "convex-constraint";
    case ReformVariant::Interior: return "interior";
    case ReformVariant::UnsupportedSingleton: return "unsupported-singleton";
  }
  return "unknown";
}

namespace {

double coarse_lambda_max(const SparseSymmetric& a, double coarse_tol) {
  if (a.n() <= kDenseLimit) return symmetric_eigen(a.to_dense(), false).values.back();
  // A Ritz value is within its residual of an eigenvalue; with the residual
  // at half the margin the bound below stays above the true maximum.
  return max_eigen(a, 0.5 * coarse_tol).value;
}

}  // namespace

double estimate_L(const Reformulation& reform, double coarse_tol) {
  require(coarse_tol > 0.0, ErrorKind::Precondition, "estimate_L: coarse_tol must be positive");
  double m = coarse_lambda_max(reform.h_left.Q, coarse_tol);
  if (reform.variant == ReformVariant::TwoConvex) m = std::max(m, coarse_lambda_max(reform.h_right.Q, coarse_tol));
  return m + coarse_tol;
}

Reformulation build_reformulation(const GtrsProblem& problem, const PencilInterval& interval,
                                  bool use_gamma_split) {
  Reformulation r;
  r.sense = problem.sense;
  r.precond = interval.q0_precond;
  const bool equality = problem.sense == ConstraintSense::Equality;

  switch (interval.condition) {
    case IntervalCondition::Empty:
      fail(ErrorKind::Unbounded, "empty interval: problem is unbounded below");
    case IntervalCondition::Singleton:
      r.variant = ReformVariant::UnsupportedSingleton;
      r.provenance = "singleton interval";
      return r;
    case IntervalCondition::RightUnbounded:
      require(!equality, ErrorKind::Unsupported, "equality constraint with a positive semidefinite Q2 is unsupported");
      r.variant = ReformVariant::ConvexConstraint;
      r.lambda_left = interval.working_left();
      r.h_left = combine(problem.f1, r.lambda_left, problem.f2);
      r.h_right = problem.f2;
      if (!interval.clamped && !interval.left_multiple) r.null_left = interval.v_left;
      r.provenance = "right-unbounded interval: convex objective over the convex constraint";
      r.L = estimate_L(r);
      return r;
    case IntervalCondition::LeftUnbounded:
      require(!equality, ErrorKind::Unsupported, "equality constraint with a negative semidefinite Q2 is unsupported");
      break;
    case IntervalCondition::TwoSided:
      break;
  }

  double left = interval.working_left();
  double right = interval.working_right();
  r.provenance = "endpoint pair";
  if (use_gamma_split) {
    const auto g = gamma_eval(problem, interval.lambda0);
    const Vec b0 = lincomb(1.0, problem.f1.b, interval.lambda0, problem.f2.b);
    const double tol = 1e-10 * (1.0 + norm2(b0));
    const bool at_zero = !equality && interval.lambda0 == 0.0;
    if (std::fabs(g.gamma) <= tol || (at_zero && g.gamma < 0.0)) {
      r.variant = ReformVariant::Interior;
      r.lambda_left = r.lambda_right = interval.lambda0;
      r.x_interior = g.x;
      r.provenance = "gamma(lambda0) vanishes: stationary point is optimal";
      return r;
    }
    if (g.gamma > 0.0) {
      left = interval.lambda0;
      r.provenance = "gamma(lambda0) > 0: upper half interval";
    } else {
      right = interval.lambda0;
      r.provenance = "gamma(lambda0) < 0: lower half interval";
    }
  }
  r.variant = ReformVariant::TwoConvex;
  r.lambda_left = left;
  r.lambda_right = right;
  r.h_left = combine(problem.f1, left, problem.f2);
  r.h_right = combine(problem.f1, right, problem.f2);
  r.q1 = problem.f1.Q;
  r.q2 = problem.f2.Q;
  if (left == interval.lambda1 && !interval.left_multiple) r.null_left = interval.v_left;
  if (right == interval.lambda2 && !interval.right_multiple) r.null_right = interval.v_right;
  r.L = estimate_L(r);
  return r;
}

}  // namespace gtrs
