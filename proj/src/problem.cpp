#include "gtrs/problem.hpp"

#include <cmath>
#include <string>

#include "gtrs/error.hpp"

namespace gtrs {

double QuadraticForm::evaluate(std::span<const double> x) const {
  const Vec qx = Q.multiply(x);
  return evaluate(x, qx);
}

double QuadraticForm::evaluate(std::span<const double> x, std::span<const double> qx) const {
  double s = c;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * (0.5 * qx[i] + b[i]);
  return s;
}

Vec QuadraticForm::gradient(std::span<const double> x) const {
  Vec g = Q.multiply(x);
  axpy(1.0, b, g);
  return g;
}

QuadraticForm combine(const QuadraticForm& f1, double lambda, const QuadraticForm& f2) {
  QuadraticForm h;
  h.Q = combine(1.0, f1.Q, lambda, f2.Q);
  h.b = lincomb(1.0, f1.b, lambda, f2.b);
  h.c = f1.c + lambda * f2.c;
  return h;
}

void GtrsProblem::validate() const {
  const std::size_t n = f1.n();
  require(n > 0, ErrorKind::InvalidInput, "problem dimension must be positive");
  require(f2.n() == n, ErrorKind::InvalidInput,
          "Q1 is " + std::to_string(n) + "x" + std::to_string(n) + " but Q2 is " +
              std::to_string(f2.n()) + "x" + std::to_string(f2.n()));
  require(f1.b.size() == n, ErrorKind::InvalidInput, "b1 has length " + std::to_string(f1.b.size()) +
                                                         ", expected " + std::to_string(n));
  require(f2.b.size() == n, ErrorKind::InvalidInput, "b2 has length " + std::to_string(f2.b.size()) +
                                                         ", expected " + std::to_string(n));
  for (double v : f1.b) require(std::isfinite(v), ErrorKind::InvalidInput, "b1 has a non-finite entry");
  for (double v : f2.b) require(std::isfinite(v), ErrorKind::InvalidInput, "b2 has a non-finite entry");
  require(f1.c == 0.0, ErrorKind::InvalidInput, "the objective carries no constant term");
  require(std::isfinite(f2.c), ErrorKind::InvalidInput, "constraint constant is not finite");
}

}  // namespace gtrs
