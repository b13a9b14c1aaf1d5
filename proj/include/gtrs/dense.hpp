#pragma once

// Small dense kernels: the n <= 300 fallback paths and the Rayleigh-Ritz
// subproblems inside LOBPCG.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gtrs/vector.hpp"

namespace gtrs {

/// Row-major dense matrix.
class DenseMatrix {
public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  Vec column(std::size_t c) const;
  void set_column(std::size_t c, std::span<const double> v);

  /// y = A*x
  Vec multiply(std::span<const double> x) const;

  DenseMatrix transpose() const;
  DenseMatrix operator*(const DenseMatrix& other) const;

  std::vector<double>& data() noexcept { return data_; }
  const std::vector<double>& data() const noexcept { return data_; }

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Lower Cholesky factor A = L L^T of a symmetric positive definite matrix.
class CholeskyFactor {
public:
  /// Returns std::nullopt when a pivot falls to or below `min_pivot`.
  static std::optional<CholeskyFactor> factor(const DenseMatrix& a, double min_pivot = 0.0);

  std::size_t size() const noexcept { return l_.rows(); }
  const DenseMatrix& lower() const noexcept { return l_; }

  /// Solves L y = b in place.
  void solve_lower(std::span<double> b) const;
  /// Solves L^T y = b in place.
  void solve_upper(std::span<double> b) const;
  /// Solves A x = b in place.
  void solve(std::span<double> b) const;

  double min_pivot() const noexcept { return min_pivot_; }

private:
  DenseMatrix l_;
  double min_pivot_ = 0.0;
};

/// Eigen-decomposition of a symmetric matrix, ascending eigenvalues; column k
/// of `vectors` pairs with `values[k]`.
struct SymmetricEigen {
  Vec values;
  DenseMatrix vectors;
};

/// Householder tridiagonalisation followed by implicit QL. Only the lower
/// triangle of `a` is read.
SymmetricEigen symmetric_eigen(const DenseMatrix& a, bool want_vectors = true);

}  // namespace gtrs
