#pragma once

#include <cstddef>
#include <span>

#include "gtrs/sparse.hpp"
#include "gtrs/vector.hpp"

namespace gtrs {

/// q(x) = 1/2 x^T Q x + b^T x + c
struct QuadraticForm {
  SparseSymmetric Q;
  Vec b;
  double c = 0.0;

  std::size_t n() const noexcept { return Q.n(); }
  double evaluate(std::span<const double> x) const;
  /// Same value when Qx is already known.
  double evaluate(std::span<const double> x, std::span<const double> qx) const;
  Vec gradient(std::span<const double> x) const;
};

/// f1 + lambda * f2
QuadraticForm combine(const QuadraticForm& f1, double lambda, const QuadraticForm& f2);

enum class ConstraintSense { Inequality, Equality };

/// minimize f1(x) subject to f2(x) <= 0 (or == 0).
struct GtrsProblem {
  QuadraticForm f1;
  QuadraticForm f2;
  ConstraintSense sense = ConstraintSense::Inequality;

  std::size_t n() const noexcept { return f1.n(); }
  /// Dimension and finiteness checks; throws InvalidInput.
  void validate() const;
};

}  // namespace gtrs
