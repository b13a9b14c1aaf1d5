#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gtrs/dense.hpp"
#include "gtrs/simd.hpp"
#include "gtrs/vector.hpp"

namespace gtrs {

struct Triplet {
  std::int32_t row = 0;
  std::int32_t col = 0;
  double value = 0.0;
};

/// Sparse symmetric matrix. The public contract is the lower-triangle
/// coordinate list (row >= col, no duplicates, sorted by row then column);
/// a full row-compressed copy is kept for products.
class SparseSymmetric {
public:
  SparseSymmetric() = default;

  /// Entries may lie in either triangle; (i,j) and (j,i) are treated as the
  /// same position and summed. Exact zeros are dropped.
  static SparseSymmetric from_triplets(std::size_t n, std::vector<Triplet> entries);
  static SparseSymmetric identity(std::size_t n);
  static SparseSymmetric diagonal(std::span<const double> d);
  /// Reads the lower triangle of `a`; entries with |a_ij| <= drop are skipped.
  static SparseSymmetric from_dense(const DenseMatrix& a, double drop = 0.0);

  std::size_t n() const noexcept { return n_; }
  const std::vector<Triplet>& entries() const noexcept { return lower_; }
  /// Stored nonzeros counting both triangles.
  std::size_t nnz() const noexcept { return val_.size(); }
  double density() const noexcept;

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vec multiply(std::span<const double> x) const;
  /// x^T A x
  double quad(std::span<const double> x) const;

  DenseMatrix to_dense() const;
  Vec diagonal_values() const;
  /// Max absolute row sum; bounds the spectral radius.
  double norm_inf() const;

  simd::CsrView csr() const noexcept { return {n_, row_ptr_.data(), col_.data(), val_.data()}; }

private:
  void build_csr();

  std::size_t n_ = 0;
  std::vector<Triplet> lower_;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<std::int32_t> col_;
  std::vector<double> val_;
};

/// a*A + b*B
SparseSymmetric combine(double a, const SparseSymmetric& A, double b, const SparseSymmetric& B);

}  // namespace gtrs
