#pragma once

#include <memory>
#include <string>

#include "gtrs/pencil.hpp"
#include "gtrs/problem.hpp"

namespace gtrs {

enum class ReformVariant {
  TwoConvex,             // min max(h_left, h_right)
  ConvexConstraint,      // min h_left subject to f2 <= 0 (h_right holds f2)
  Interior,              // x_interior already solves the problem
  UnsupportedSingleton,
};

const char* to_string(ReformVariant v);

struct Reformulation {
  ReformVariant variant = ReformVariant::UnsupportedSingleton;
  double lambda_left = 0.0;   // multiplier of h_left (the single one for ConvexConstraint)
  double lambda_right = 0.0;
  QuadraticForm h_left;
  QuadraticForm h_right;
  Vec x_interior;
  double L = 0.0;  // upper bound on the largest Hessian eigenvalue
  std::string provenance;
  ConstraintSense sense = ConstraintSense::Inequality;
  std::shared_ptr<const Preconditioner> precond;  // approximates (Q1 + lambda0 Q2)^{-1}
  // Unit null vectors of the Hessians when they sit on a simple interval
  // endpoint; empty otherwise.
  Vec null_left, null_right;
  // Q1 and Q2 for TwoConvex: both Hessian products then cost one product
  // with each instead of one with each (denser) combination.
  SparseSymmetric q1, q2;

  std::size_t n() const noexcept { return h_left.n(); }
};

/// Builds h_i = f1 + lambda_i f2 for the interval's case. With
/// `use_gamma_split` the sign of gamma(lambda0) selects half the interval.
Reformulation build_reformulation(const GtrsProblem& problem, const PencilInterval& interval,
                                  bool use_gamma_split = false);

/// Coarse largest-eigenvalue bound of the Hessians plus `coarse_tol`.
double estimate_L(const Reformulation& reform, double coarse_tol = 0.1);

}  // namespace gtrs
