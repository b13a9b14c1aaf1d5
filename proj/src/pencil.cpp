#include "gtrs/pencil.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "gtrs/error.hpp"

namespace gtrs {

const char* to_string(IntervalCondition c) {
  switch (c) {
    case IntervalCondition::TwoSided: return "two-sided";
    case IntervalCondition::RightUnbounded: return "right-unbounded";
    case IntervalCondition::LeftUnbounded: return "left-unbounded";
    case IntervalCondition::Singleton: return "singleton";
    case IntervalCondition::Empty: return "empty";
  }
  return "unknown";
}

void check_common_null_space(const GtrsProblem& problem) {
  const auto& q1 = problem.f1.Q;
  const auto& q2 = problem.f2.Q;
  const std::size_t n = problem.n();
  const double s1 = q1.norm_inf(), s2 = q2.norm_inf();
  const double scale = s1 * s1 + s2 * s2;
  if (scale == 0.0) fail(ErrorKind::Validation, "Q1 and Q2 share a nontrivial null space (both are zero)");
  double smallest;
  if (n <= kDenseLimit) {
    // Q1^2 + Q2^2 is singular exactly on the common null space.
    const DenseMatrix d1 = q1.to_dense(), d2 = q2.to_dense();
    DenseMatrix g = d1 * d1;
    const DenseMatrix g2 = d2 * d2;
    for (std::size_t i = 0; i < g.data().size(); ++i) g.data()[i] += g2.data()[i];
    smallest = symmetric_eigen(g, false).values[0];
  } else {
    // Restrict Q2 to null(Q1): the common null space is the null space of
    // (Q2 V)^T (Q2 V).
    const auto v = null_space_basis(q1, 1e-10);
    if (v.empty()) return;
    std::vector<Vec> w;
    for (const auto& col : v) w.push_back(q2.multiply(col));
    DenseMatrix g(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) g(i, j) = g(j, i) = dot(w[i], w[j]);
    smallest = symmetric_eigen(g, false).values[0];
  }
  if (smallest <= 1e-20 * scale) {
    fail(ErrorKind::Validation, "common null space of Q1 and Q2 is nontrivial");
  }
}

Lambda0Search find_lambda0(const GtrsProblem& problem, std::size_t budget) {
  require(budget >= 1, ErrorKind::Precondition, "find_lambda0: budget must be at least 1");
  const auto& f1 = problem.f1;
  const auto& f2 = problem.f2;
  const bool both_signs = problem.sense == ConstraintSense::Equality;

  Lambda0Search out;
  std::optional<double> best_pd;
  double best_pd_phi = -std::numeric_limits<double>::infinity();
  double best_phi = -std::numeric_limits<double>::infinity();
  double best_phi_tol = 0.0;
  std::size_t probes = 0;
  std::size_t after_pd = 0;
  constexpr std::size_t kExtraProbes = 8;

  // phi(lambda) = smallest eigenvalue of Q1 + lambda Q2, concave in lambda.
  auto phi = [&](double lambda) {
    const auto a = combine(1.0, f1.Q, lambda, f2.Q);
    const double tol = default_pd_tol(a);
    const auto r = is_positive_definite(a, tol);
    ++probes;
    if (best_pd) ++after_pd;
    if (r.positive_definite && r.min_eigenvalue > best_pd_phi) {
      best_pd = lambda;
      best_pd_phi = r.min_eigenvalue;
    }
    if (r.min_eigenvalue > best_phi) {
      best_phi = r.min_eigenvalue;
      best_phi_tol = tol;
    }
    return r.min_eigenvalue;
  };
  auto done = [&]() { return probes >= budget || (best_pd && after_pd >= kExtraProbes); };

  const double phi0 = phi(0.0);
  if (best_pd) return {0.0, best_pd_phi, probes};

  // Pick the ascent direction, then grow the bracket geometrically.
  double dir = 1.0;
  double phi_step = done() ? phi0 : phi(1.0);
  if (both_signs && !done()) {
    const double phi_neg = phi(-1.0);
    if (phi_neg > phi_step) {
      dir = -1.0;
      phi_step = phi_neg;
    }
  }
  double lo = both_signs ? -1.0 : 0.0, hi = 1.0;
  if (phi_step > phi0) {
    double prev = 0.0, cur = dir, phi_cur = phi_step;
    hi = 2.0 * cur;
    while (!done() && std::fabs(cur) < 1e15) {
      const double next = 2.0 * cur;
      const double phi_next = phi(next);
      lo = prev;
      hi = next;
      if (phi_next <= phi_cur) break;
      prev = cur;
      cur = next;
      phi_cur = phi_next;
    }
  }

  // Golden-section refinement of the concave maximum on [lo, hi].
  if (lo > hi) std::swap(lo, hi);
  const double ratio = 0.5 * (3.0 - std::sqrt(5.0));
  double a = lo, b = hi;
  double x1 = a + ratio * (b - a), x2 = b - ratio * (b - a);
  double p1 = -std::numeric_limits<double>::infinity(), p2 = p1;
  if (!done()) p1 = phi(x1);
  if (!done()) p2 = phi(x2);
  while (!done() && (b - a) > 1e-14 * (1.0 + std::fabs(a) + std::fabs(b))) {
    if (p1 < p2) {
      a = x1;
      x1 = x2;
      p1 = p2;
      x2 = b - ratio * (b - a);
      p2 = phi(x2);
    } else {
      b = x2;
      x2 = x1;
      p2 = p1;
      x1 = a + ratio * (b - a);
      p1 = phi(x1);
    }
  }

  if (best_pd) return {*best_pd, best_pd_phi, probes};

  check_common_null_space(problem);
  if (best_phi >= -best_phi_tol) {
    fail(ErrorKind::Unsupported,
         "Q1 + lambda*Q2 is positive semidefinite but never positive definite: singleton interval is unsupported");
  }
  fail(ErrorKind::Unbounded,
       "no admissible lambda makes Q1 + lambda*Q2 positive semidefinite: problem is unbounded below (best smallest "
       "eigenvalue " + std::to_string(best_phi) + ")");
}

PencilInterval compute_interval(const GtrsProblem& problem, double lambda0) {
  const auto& q2 = problem.f2.Q;
  const auto q0 = combine(1.0, problem.f1.Q, lambda0, q2);
  PencilInterval iv;
  iv.lambda0 = lambda0;
  if (q0.n() > kDenseLimit) iv.q0_precond = Preconditioner::build(q0);

  const double tol = 1e-10 * (q2.norm_inf() + q0.norm_inf());
  const auto neg_q2 = combine(-1.0, q2, 0.0, q2);
  const auto r1 = max_gen_eig(neg_q2, q0, tol, iv.q0_precond);
  const auto r2 = max_gen_eig(q2, q0, tol, iv.q0_precond);
  iv.u1 = r1.value;
  iv.u2 = r2.value;
  iv.v_right = r1.vector;
  iv.v_left = r2.vector;
  iv.right_multiple = r1.multiple;
  iv.left_multiple = r2.multiple;

  // Values this small relative to the other are rounding noise around zero.
  const double noise = 1e-12 * std::max({std::fabs(iv.u1), std::fabs(iv.u2), 1e-300});
  const bool right_open = iv.u1 <= noise;
  const bool left_open = iv.u2 <= noise;
  const double inf = std::numeric_limits<double>::infinity();
  iv.lambda2 = right_open ? inf : lambda0 + 1.0 / iv.u1;
  iv.lambda1 = left_open ? -inf : lambda0 - 1.0 / iv.u2;

  if (right_open) {
    iv.condition = IntervalCondition::RightUnbounded;
  } else if (left_open) {
    iv.condition = IntervalCondition::LeftUnbounded;
  } else if (iv.lambda2 - iv.lambda1 <= 1e-10 * (1.0 + std::fabs(lambda0))) {
    iv.condition = IntervalCondition::Singleton;
  } else {
    iv.condition = IntervalCondition::TwoSided;
  }
  iv.clamped = problem.sense == ConstraintSense::Inequality && iv.lambda1 < 0.0;
  return iv;
}

GammaValue gamma_eval(const GtrsProblem& problem, double lambda, double tol) {
  const auto a = combine(1.0, problem.f1.Q, lambda, problem.f2.Q);
  Vec rhs = lincomb(-1.0, problem.f1.b, -lambda, problem.f2.b);
  GammaValue out;
  out.x = cg_solve(a, rhs, tol, 20 * a.n() + 200);
  out.gamma = problem.f2.evaluate(out.x);
  return out;
}

}  // namespace gtrs
