#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gtrs/dense.hpp"
#include "gtrs/sparse.hpp"
#include "gtrs/vector.hpp"

namespace gtrs {

/// y = Op(x); x and y never alias.
using Operator = std::function<void(std::span<const double>, std::span<double>)>;

Operator as_operator(const SparseSymmetric& a);

/// Problems up to this size take the dense eigen/factorisation paths.
inline constexpr std::size_t kDenseLimit = 300;

/// Approximate inverse of a symmetric positive definite matrix.
class Preconditioner {
public:
  enum class Kind { DenseCholesky, IncompleteCholesky, Jacobi };

  /// Dense Cholesky up to `dense_limit`, otherwise IC(0) with diagonal shifts
  /// on breakdown, otherwise Jacobi on |diag|.
  static std::shared_ptr<const Preconditioner> build(const SparseSymmetric& a,
                                                     std::size_t dense_limit = 4000);

  Kind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return n_; }
  /// z = M^{-1} r
  void apply(std::span<const double> r, std::span<double> z) const;
  Operator as_operator() const;

  /// Exact factor when kind() == DenseCholesky.
  const CholeskyFactor* cholesky() const noexcept { return dense_ ? &*dense_ : nullptr; }

private:
  Kind kind_ = Kind::Jacobi;
  std::size_t n_ = 0;
  std::optional<CholeskyFactor> dense_;
  // IC(0): lower factor in row-compressed form, diagonal last in each row.
  std::vector<std::int64_t> ptr_;
  std::vector<std::int32_t> col_;
  std::vector<double> val_;
  Vec inv_diag_;
};

/// Conjugate gradients. Returns x with ||Ax - b|| <= tol * max(1, ||b||);
/// throws IterativeFailure (best iterate, its residual) otherwise.
Vec cg_solve(const SparseSymmetric& a, std::span<const double> b, double tol, std::size_t max_iter);

/// Preconditioned CG on an operator. `x0` may be empty.
Vec pcg_solve(const Operator& a, std::span<const double> b, double tol, std::size_t max_iter,
              const Operator* precond = nullptr, std::span<const double> x0 = {});

struct EigenResult {
  double value = 0.0;
  Vec vector;             // unit 2-norm
  double residual = 0.0;  // ||M v - value N v|| / ||v||
  bool converged = false;
  bool multiple = false;  // extreme eigenvalue numerically repeated
  std::size_t iterations = 0;
};

struct LobpcgOptions {
  std::size_t block = 3;
  std::size_t nev = 1;
  double tol = 1e-10;  // absolute residual per wanted pair
  std::size_t max_iter = 2000;
  std::uint64_t seed = 0x5eed;
  /// Replaces the default test (first nev residuals <= tol) when set.
  /// Receives descending Ritz values and their residuals.
  std::function<bool(const Vec&, const Vec&)> stop;
};

struct LobpcgResult {
  Vec values;                // descending
  std::vector<Vec> vectors;  // unit 2-norm
  Vec residuals;
  bool converged = false;
  std::size_t iterations = 0;
};

/// Largest eigenpairs of the definite pencil (A, B); B null means identity,
/// T null means no preconditioning.
LobpcgResult lobpcg(std::size_t n, const Operator& a, const Operator* b, const Operator* t,
                    const LobpcgOptions& opts, const std::vector<Vec>* initial = nullptr);

/// Largest generalized eigenpair of (M, N), N positive definite. Dense for
/// n <= kDenseLimit. `precond` approximates N^{-1}; built when absent.
EigenResult max_gen_eig(const SparseSymmetric& m, const SparseSymmetric& n, double tol,
                        std::shared_ptr<const Preconditioner> precond = nullptr);

/// Orthonormal basis of the eigenspace with |lambda| <= tol*||A||.
/// `precond` optionally approximates the inverse of a nearby SPD matrix.
std::vector<Vec> null_space_basis(const SparseSymmetric& a, double tol,
                                  std::shared_ptr<const Preconditioner> precond = nullptr);

struct DefinitenessResult {
  bool positive_definite = false;
  double min_eigenvalue = 0.0;  // estimate; exact up to rounding when dense
};

/// Default threshold 1e-10 * (1 + ||A||_inf).
double default_pd_tol(const SparseSymmetric& a);

/// True iff the smallest eigenvalue of A exceeds `tol`.
DefinitenessResult is_positive_definite(const SparseSymmetric& a, double tol);

/// Smallest eigenvalue estimate of A (dense for small n).
double min_eigenvalue(const SparseSymmetric& a, std::shared_ptr<const Preconditioner> precond = nullptr);
/// Largest eigenvalue estimate of A with residual at most `tol`.
EigenResult max_eigen(const SparseSymmetric& a, double tol);

}  // namespace gtrs
