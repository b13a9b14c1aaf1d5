// Dense reference solver on Eigen. It shares no numerical code with the
// iterative pipeline: the pencil is diagonalised once and the constraint
// value along the multiplier interval is bisected in those coordinates.
#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "gtrs/error.hpp"
#include "gtrs/frontends.hpp"

namespace gtrs {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd dense(const SparseSymmetric& a) {
  MatrixXd m = MatrixXd::Zero(a.n(), a.n());
  for (const auto& t : a.entries()) m(t.row, t.col) = m(t.col, t.row) = t.value;
  return m;
}

VectorXd vec(const Vec& v) { return Eigen::Map<const VectorXd>(v.data(), v.size()); }

struct Quad {
  MatrixXd Q;
  VectorXd b;
  double c;
  double operator()(const VectorXd& x) const { return 0.5 * x.dot(Q * x) + b.dot(x) + c; }
  VectorXd grad(const VectorXd& x) const { return Q * x + b; }
};

double min_eig(const MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

// Maximiser of the concave function lambda -> min eig(Q1 + lambda Q2).
double best_lambda(const MatrixXd& q1, const MatrixXd& q2, bool allow_negative) {
  auto phi = [&](double l) { return min_eig(q1 + l * q2); };
  double a = allow_negative ? -1.0 : 0.0, b = 1.0;
  while (b < 1e12 && phi(b) >= phi(0.5 * b)) b *= 2.0;
  while (allow_negative && a > -1e12 && phi(a) >= phi(0.5 * a)) a *= 2.0;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = phi(x1), f2 = phi(x2);
  for (int it = 0; it < 300 && b - a > 1e-14 * (1.0 + std::fabs(a) + std::fabs(b)); ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = phi(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = phi(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

}  // namespace

OracleResult oracle_solve(const GtrsProblem& problem, double tol) {
  problem.validate();
  const std::size_t n = problem.n();
  require(n <= kDenseLimit, ErrorKind::Unsupported, "oracle_solve: dense reference limited to n <= 300");
  const bool eq = problem.sense == ConstraintSense::Equality;
  const Quad f1{dense(problem.f1.Q), vec(problem.f1.b), 0.0};
  const Quad f2{dense(problem.f2.Q), vec(problem.f2.b), problem.f2.c};
  const double scale = f1.Q.norm() + f2.Q.norm();

  // A definite point of the pencil.
  double lambda0 = 0.0;
  if (min_eig(f1.Q) <= 1e-12 * scale) {
    lambda0 = best_lambda(f1.Q, f2.Q, eq);
    const double phi = min_eig(f1.Q + lambda0 * f2.Q);
    if (phi <= 1e-12 * scale) {
      if (phi >= -1e-10 * scale) fail(ErrorKind::Unsupported, "oracle_solve: singleton multiplier interval");
      fail(ErrorKind::Unbounded, "oracle_solve: problem is unbounded below");
    }
  }

  // Q2 V = Q0 V diag(mu), V^T Q0 V = I.
  const MatrixXd q0 = f1.Q + lambda0 * f2.Q;
  Eigen::GeneralizedSelfAdjointEigenSolver<MatrixXd> ges(f2.Q, q0);
  const VectorXd mu = ges.eigenvalues();
  const MatrixXd V = ges.eigenvectors();
  const double inf = std::numeric_limits<double>::infinity();
  const double mu_max = mu.maxCoeff(), mu_min = mu.minCoeff();
  const double mu_scale = std::max(std::fabs(mu_max), std::fabs(mu_min));
  const double l1 = mu_max > 1e-12 * mu_scale ? lambda0 - 1.0 / mu_max : -inf;
  const double l2 = mu_min < -1e-12 * mu_scale ? lambda0 - 1.0 / mu_min : inf;
  const double lo = eq ? l1 : std::max(l1, 0.0);
  const double hi = l2;

  const VectorXd vb1 = V.transpose() * f1.b, vb2 = V.transpose() * f2.b;
  auto x_of = [&](double l) -> VectorXd {
    VectorXd y(n);
    for (std::size_t i = 0; i < n; ++i) y(i) = -(vb1(i) + l * vb2(i)) / (1.0 + (l - lambda0) * mu(i));
    return V * y;
  };
  auto gamma = [&](double l) { return f2(x_of(l)); };

  OracleResult out;
  auto finish = [&](double l, const VectorXd& x, bool exact) {
    out.multiplier = l;
    out.x.assign(x.data(), x.data() + n);
    out.value = exact ? f1(x) : f1(x) + l * f2(x);
    return out;
  };

  // Endpoint analysis: the null directions there and whether the linear
  // term couples to them. Without coupling the stationary point has a limit.
  struct End {
    bool finite = false, coupled = true;
    double gamma = 0.0;
    VectorXd x, null;
  };
  auto analyse = [&](double e) {
    End end;
    if (!std::isfinite(e)) return end;
    end.finite = true;
    VectorXd y(n);
    const VectorXd w = vb1 + e * vb2;
    end.coupled = false;
    int null_index = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = 1.0 + (e - lambda0) * mu(i);
      if (std::fabs(d) <= 1e-9) {
        if (std::fabs(w(i)) > 1e-9 * (1.0 + w.norm())) end.coupled = true;
        y(i) = -vb2(i) / mu(i);
        null_index = static_cast<int>(i);
      } else {
        y(i) = -w(i) / d;
      }
    }
    end.x = V * y;
    end.gamma = f2(end.x);
    if (null_index >= 0) end.null = V.col(null_index).normalized();
    return end;
  };

  // Hard case: move the limit point along the null direction onto f2 = 0.
  auto hard = [&](double e, const End& end) {
    const VectorXd& v = end.null;
    const double a = 0.5 * v.dot(f2.Q * v), b = v.dot(f2.grad(end.x)), c = end.gamma;
    double disc = std::max(b * b - 4.0 * a * c, 0.0);
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double theta = 0.0;
    if (q != 0.0) {
      const double r1 = q / a, r2 = c / q;
      theta = std::fabs(r1) <= std::fabs(r2) ? r1 : r2;
    }
    out.hard_case = true;
    return finish(e, end.x + theta * v, true);
  };

  // Interior solution with a zero multiplier.
  if (!eq && lo == 0.0 && l1 < 0.0 && gamma(0.0) <= 0.0) return finish(0.0, x_of(0.0), true);

  const End left = analyse(lo), right = analyse(hi);
  if (left.finite && !left.coupled && left.gamma <= 0.0 && !(lo == 0.0 && !eq && l1 < 0.0))
    return hard(lo, left);
  if (right.finite && !right.coupled && right.gamma >= 0.0) return hard(hi, right);

  // Bracket the sign change of gamma strictly inside the interval.
  double a = lo, b = hi;
  if (!std::isfinite(a)) {
    a = std::isfinite(b) ? b - 1.0 : -1.0;
    while (gamma(a) <= 0.0) {
      a = std::isfinite(b) ? b - 2.0 * (b - a) : 2.0 * a;
      require(a > -1e15, ErrorKind::Numerical, "oracle_solve: no sign change of gamma on the left");
    }
  }
  if (!std::isfinite(b)) {
    b = std::max(a, 0.0) + 1.0;
    while (gamma(b) >= 0.0) {
      b = a + 2.0 * (b - a);
      require(b < 1e15, ErrorKind::Numerical, "oracle_solve: constraint appears infeasible");
    }
  }
  const double width_tol = tol * (1.0 + (std::isfinite(l2) ? std::fabs(l2) : std::fabs(b)));
  for (int it = 0; it < 200 && b - a > width_tol; ++it) {
    const double m = 0.5 * (a + b);
    if (m <= a || m >= b) break;
    (gamma(m) > 0.0 ? a : b) = m;
  }
  const double l = 0.5 * (a + b);
  return finish(l, x_of(l), false);
}

}  // namespace gtrs
