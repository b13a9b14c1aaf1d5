#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gtrs/error.hpp"
#include "gtrs/linalg.hpp"

namespace gtrs {

Operator as_operator(const SparseSymmetric& a) {
  return [&a](std::span<const double> x, std::span<double> y) { a.multiply(x, y); };
}

Vec cg_solve(const SparseSymmetric& a, std::span<const double> b, double tol, std::size_t max_iter) {
  require(b.size() == a.n(), ErrorKind::Precondition, "cg_solve: dimension mismatch");
  return pcg_solve(as_operator(a), b, tol, max_iter);
}

Vec pcg_solve(const Operator& a, std::span<const double> b, double tol, std::size_t max_iter,
              const Operator* precond, std::span<const double> x0) {
  require(tol > 0.0, ErrorKind::Precondition, "cg_solve: tol must be positive");
  const std::size_t n = b.size();
  const double target = tol * std::max(1.0, norm2(b));

  Vec x = x0.empty() ? Vec(n, 0.0) : Vec(x0.begin(), x0.end());
  Vec r(n), z(n), p(n), ap(n);
  auto true_residual = [&]() {
    a(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    return norm2(r);
  };

  double rnorm = true_residual();
  Vec best = x;
  double best_res = rnorm;
  if (rnorm <= target) return x;

  std::size_t it = 0;
  // Outer loop restarts from the true residual whenever the recurrence
  // claims convergence that the explicit residual does not confirm.
  while (it < max_iter) {
    if (precond) (*precond)(r, z); else z = r;
    p = z;
    double rz = dot(r, z);
    bool restart = false;
    while (it < max_iter) {
      ++it;
      a(p, ap);
      const double pap = dot(p, ap);
      if (!(pap > 0.0) || !std::isfinite(pap)) {
        restart = false;
        it = max_iter;
        break;
      }
      const double alpha = rz / pap;
      axpy(alpha, p, x);
      axpy(-alpha, ap, r);
      rnorm = norm2(r);
      if (rnorm <= target) {
        restart = true;
        break;
      }
      if (precond) (*precond)(r, z); else z = r;
      const double rz_new = dot(r, z);
      simd::xpby(z, rz_new / rz, p);
      rz = rz_new;
      if (it % 50 == 0) {
        const double tr = norm2(r);
        if (tr < best_res) {
          best_res = tr;
          best = x;
        }
      }
    }
    rnorm = true_residual();
    if (rnorm < best_res) {
      best_res = rnorm;
      best = x;
    }
    if (rnorm <= target) return x;
    if (!restart) break;
  }
  throw IterativeFailure("conjugate gradients did not converge in " + std::to_string(max_iter) +
                             " iterations (residual " + std::to_string(best_res) + ")",
                         std::move(best), best_res);
}

}  // namespace gtrs
