#pragma once

#include <cstddef>
#include <limits>
#include <memory>

#include "gtrs/linalg.hpp"
#include "gtrs/problem.hpp"

namespace gtrs {

enum class IntervalCondition {
  TwoSided,        // [lambda1, lambda2], lambda1 < lambda2
  RightUnbounded,  // [lambda1, inf): Q2 positive semidefinite
  LeftUnbounded,   // (-inf, lambda2]: Q2 negative semidefinite
  Singleton,
  Empty,
};

const char* to_string(IntervalCondition c);

/// Where Q1 + lambda*Q2 is positive semidefinite. lambda1/lambda2 are the raw
/// endpoints (infinite when unbounded); the working interval additionally
/// clips to lambda >= 0 for inequality-constrained problems.
struct PencilInterval {
  double lambda0 = 0.0;
  double lambda1 = -std::numeric_limits<double>::infinity();
  double lambda2 = std::numeric_limits<double>::infinity();
  double u1 = 0.0;  // largest generalized eigenvalue of (-Q2, Q0)
  double u2 = 0.0;  // largest generalized eigenvalue of (Q2, Q0)
  IntervalCondition condition = IntervalCondition::Empty;
  bool clamped = false;  // lambda1 < 0 was raised to 0

  // Boundary null directions from the eigensolves, with multiplicity flags.
  Vec v_left, v_right;
  bool left_multiple = false, right_multiple = false;

  /// Approximate inverse of Q1 + lambda0*Q2, shared by later stages.
  std::shared_ptr<const Preconditioner> q0_precond;

  double working_left() const noexcept { return clamped ? 0.0 : lambda1; }
  double working_right() const noexcept { return lambda2; }
};

struct Lambda0Search {
  double lambda0 = 0.0;
  double min_eigenvalue = 0.0;  // certificate of Q1 + lambda0*Q2
  std::size_t probes = 0;
};

/// A point where Q1 + lambda*Q2 is positive definite, preferring lambda >= 0
/// (only lambda >= 0 is searched for inequality problems). Throws Unbounded
/// when no positive semidefinite point exists, Unsupported for a singleton,
/// Validation when Q1 and Q2 share a null vector.
Lambda0Search find_lambda0(const GtrsProblem& problem, std::size_t budget = 60);

/// Endpoints from the two extreme generalized eigenvalues of the pencil
/// against Q0 = Q1 + lambda0*Q2 (which must be positive definite).
PencilInterval compute_interval(const GtrsProblem& problem, double lambda0);

struct GammaValue {
  Vec x;         // -(Q1 + lambda Q2)^{-1} (b1 + lambda b2)
  double gamma;  // f2(x)
};

GammaValue gamma_eval(const GtrsProblem& problem, double lambda, double tol = 1e-12);

/// Throws Validation when Q1 and Q2 have a common null vector.
void check_common_null_space(const GtrsProblem& problem);

}  // namespace gtrs
