#include <algorithm>
#include <cmath>
#include <string>

#include "gtrs/error.hpp"
#include "gtrs/linalg.hpp"

namespace gtrs {

namespace {

double residual_norm(const SparseSymmetric& m, const SparseSymmetric* nmat, double value,
                     std::span<const double> v) {
  Vec mv = m.multiply(v);
  Vec nv = nmat ? nmat->multiply(v) : Vec(v.begin(), v.end());
  for (std::size_t i = 0; i < mv.size(); ++i) mv[i] -= value * nv[i];
  return norm2(mv) / norm2(v);
}

bool nearly_equal(double top, double next) {
  const double scale = std::max(std::fabs(top), std::fabs(next));
  return top - next <= 1e-8 * scale || scale == 0.0;
}

// Orthonormalises in the Euclidean inner product, dropping dependent vectors.
std::vector<Vec> orthonormal(std::vector<Vec> vs) {
  std::vector<Vec> out;
  for (auto& v : vs) {
    const double before = norm2(v);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& q : out) axpy(-dot(q, v), q, v);
    if (norm2(v) > 1e-8 * before) {
      normalize(v);
      out.push_back(std::move(v));
    }
  }
  return out;
}

}  // namespace

EigenResult max_gen_eig(const SparseSymmetric& m, const SparseSymmetric& nmat, double tol,
                        std::shared_ptr<const Preconditioner> precond) {
  require(m.n() == nmat.n(), ErrorKind::Precondition, "max_gen_eig: dimension mismatch");
  require(tol > 0.0, ErrorKind::Precondition, "max_gen_eig: tol must be positive");
  const std::size_t n = m.n();
  EigenResult out;
  if (n == 0) return out;

  if (n <= kDenseLimit) {
    auto chol = CholeskyFactor::factor(nmat.to_dense());
    require(chol.has_value(), ErrorKind::Precondition, "max_gen_eig: N is not positive definite");
    // C = L^{-1} M L^{-T}, built row by row using the symmetry of M and C.
    DenseMatrix md = m.to_dense();
    for (std::size_t j = 0; j < n; ++j) chol->solve_lower(md.row(j));  // rows of (L^{-1} M)^T
    DenseMatrix z = md.transpose();
    for (std::size_t j = 0; j < n; ++j) chol->solve_lower(z.row(j));
    const auto eig = symmetric_eigen(z);
    out.value = eig.values[n - 1];
    Vec y = eig.vectors.column(n - 1);
    chol->solve_upper(y);
    normalize(y);
    out.vector = std::move(y);
    out.multiple = n > 1 && nearly_equal(eig.values[n - 1], eig.values[n - 2]);
    out.residual = residual_norm(m, &nmat, out.value, out.vector);
    out.converged = true;
    out.iterations = 1;
    return out;
  }

  if (!precond) precond = Preconditioner::build(nmat);
  const Operator a_op = as_operator(m);
  const Operator b_op = as_operator(nmat);
  const Operator t_op = precond->as_operator();
  LobpcgOptions opts;
  opts.block = 3;
  opts.nev = 1;
  opts.tol = tol;
  const auto r = lobpcg(n, a_op, &b_op, &t_op, opts);
  out.value = r.values[0];
  out.vector = r.vectors[0];
  out.residual = r.residuals[0];
  out.converged = r.converged;
  out.iterations = r.iterations;
  out.multiple = r.values.size() > 1 && nearly_equal(r.values[0], r.values[1]);
  if (!out.converged) {
    throw IterativeFailure("generalized eigensolver did not converge (residual " +
                               std::to_string(out.residual) + ")",
                           out.vector, out.residual);
  }
  return out;
}

double default_pd_tol(const SparseSymmetric& a) { return 1e-10 * (1.0 + a.norm_inf()); }

double min_eigenvalue(const SparseSymmetric& a, std::shared_ptr<const Preconditioner> precond) {
  const std::size_t n = a.n();
  if (n == 0) return 0.0;
  if (n <= kDenseLimit) return symmetric_eigen(a.to_dense(), false).values[0];
  const Operator neg = [&a](std::span<const double> x, std::span<double> y) {
    a.multiply(x, y);
    simd::scal(-1.0, y);
  };
  Operator t_op;
  if (precond) t_op = precond->as_operator();
  LobpcgOptions opts;
  opts.block = 3;
  opts.nev = 1;
  opts.tol = 1e-8 * (1.0 + a.norm_inf());
  opts.max_iter = 3000;
  const auto r = lobpcg(n, neg, nullptr, precond ? &t_op : nullptr, opts);
  return -r.values[0];
}

EigenResult max_eigen(const SparseSymmetric& a, double tol) {
  EigenResult out;
  const std::size_t n = a.n();
  if (n == 0) return out;
  if (n <= kDenseLimit) {
    const auto eig = symmetric_eigen(a.to_dense());
    out.value = eig.values[n - 1];
    out.vector = eig.vectors.column(n - 1);
    out.multiple = n > 1 && nearly_equal(eig.values[n - 1], eig.values[n - 2]);
    out.residual = residual_norm(a, nullptr, out.value, out.vector);
    out.converged = true;
    return out;
  }
  LobpcgOptions opts;
  opts.block = 3;
  opts.nev = 1;
  opts.tol = tol;
  const auto r = lobpcg(n, as_operator(a), nullptr, nullptr, opts);
  out.value = r.values[0];
  out.vector = r.vectors[0];
  out.residual = r.residuals[0];
  out.converged = r.converged;
  out.iterations = r.iterations;
  out.multiple = r.values.size() > 1 && nearly_equal(r.values[0], r.values[1]);
  if (!out.converged) {
    throw IterativeFailure("largest eigenvalue estimate did not converge", out.vector, out.residual);
  }
  return out;
}

DefinitenessResult is_positive_definite(const SparseSymmetric& a, double tol) {
  DefinitenessResult out;
  const std::size_t n = a.n();
  if (n == 0) return {true, 0.0};
  if (n <= kDenseLimit) {
    out.min_eigenvalue = symmetric_eigen(a.to_dense(), false).values[0];
    out.positive_definite = out.min_eigenvalue > tol;
    return out;
  }
  // A factorisation of A - tol*I is the certificate; the eigenvalue estimate
  // is then cheap with that factor as preconditioner.
  Vec shift(n, -tol);
  const auto shifted = combine(1.0, a, 1.0, SparseSymmetric::diagonal(shift));
  auto precond = Preconditioner::build(shifted);
  if (precond->kind() == Preconditioner::Kind::DenseCholesky) {
    out.positive_definite = true;
    out.min_eigenvalue = std::max(min_eigenvalue(a, precond), std::nextafter(tol, 1e300));
    return out;
  }
  if (precond->kind() == Preconditioner::Kind::IncompleteCholesky && n <= 4000) {
    // Dense Cholesky failed: not positive definite beyond tol.
    out.positive_definite = false;
    out.min_eigenvalue = std::min(min_eigenvalue(a, nullptr), tol);
    return out;
  }
  out.min_eigenvalue = min_eigenvalue(a, precond->kind() == Preconditioner::Kind::Jacobi && n <= 4000 ? nullptr : precond);
  out.positive_definite = out.min_eigenvalue > tol;
  return out;
}

std::vector<Vec> null_space_basis(const SparseSymmetric& a, double tol,
                                  std::shared_ptr<const Preconditioner> precond) {
  const std::size_t n = a.n();
  if (n == 0) return {};
  if (n <= kDenseLimit) {
    const auto eig = symmetric_eigen(a.to_dense());
    const double norm = std::max(std::fabs(eig.values[0]), std::fabs(eig.values[n - 1]));
    const double thr = tol * norm;
    require(eig.values[0] >= -thr, ErrorKind::Precondition,
            "null_space_basis: matrix is indefinite (eigenvalue " + std::to_string(eig.values[0]) + ")");
    std::vector<Vec> basis;
    for (std::size_t j = 0; j < n && std::fabs(eig.values[j]) <= thr; ++j) basis.push_back(eig.vectors.column(j));
    return orthonormal(std::move(basis));
  }

  const double norm = std::fabs(max_eigen(a, 1e-6 * (1.0 + a.norm_inf())).value);
  const double thr = tol * norm;
  if (norm == 0.0) {
    std::vector<Vec> all(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) all[i][i] = 1.0;
    return all;
  }
  const Operator neg = [&a](std::span<const double> x, std::span<double> y) {
    a.multiply(x, y);
    simd::scal(-1.0, y);
  };
  Operator t_op;
  if (precond) t_op = precond->as_operator();

  std::vector<Vec> warm;
  for (std::size_t k = 2; k <= std::min<std::size_t>(n, 64); k *= 2) {
    LobpcgOptions opts;
    opts.block = k + 1;
    opts.nev = k;
    opts.tol = 0.5 * thr;
    opts.max_iter = 3000;
    // Done once every pair inside the band has converged and a converged
    // pair lies outside it.
    opts.stop = [thr](const Vec& values, const Vec& res) {
      for (std::size_t j = 0; j < values.size(); ++j) {
        const double lam = -values[j];
        if (std::fabs(lam) <= thr) {
          if (res[j] > 0.5 * thr) return false;
          continue;
        }
        // The first pair outside the band must itself have converged before
        // it can stand as the boundary of the null space.
        return res[j] <= 1e-3 * lam && lam - res[j] > thr;
      }
      return true;
    };
    const auto r = lobpcg(n, neg, nullptr, precond ? &t_op : nullptr, opts, &warm);
    if (!r.converged) {
      throw IterativeFailure("null_space_basis: eigensolver did not converge", r.vectors[0],
                             r.residuals[0]);
    }
    std::vector<Vec> basis;
    std::size_t j = 0;
    for (; j < r.values.size(); ++j) {
      const double lam = -r.values[j];
      require(lam >= -thr, ErrorKind::Precondition,
              "null_space_basis: matrix is indefinite (eigenvalue " + std::to_string(lam) + ")");
      if (std::fabs(lam) > thr) break;
      basis.push_back(r.vectors[j]);
    }
    if (j < r.values.size() || k >= std::min<std::size_t>(n, 64)) return orthonormal(std::move(basis));
    warm = r.vectors;
  }
  return {};
}

}  // namespace gtrs
