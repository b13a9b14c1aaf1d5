#include "gtrs/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gtrs/error.hpp"

namespace gtrs {

SparseSymmetric SparseSymmetric::from_triplets(std::size_t n, std::vector<Triplet> entries) {
  require(n <= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()),
          ErrorKind::InvalidInput, "sparse matrix dimension too large");
  for (auto& t : entries) {
    if (t.row < 0 || t.col < 0 || static_cast<std::size_t>(t.row) >= n ||
        static_cast<std::size_t>(t.col) >= n) {
      fail(ErrorKind::InvalidInput, "sparse entry (" + std::to_string(t.row) + "," +
                                        std::to_string(t.col) + ") outside a " +
                                        std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    require(std::isfinite(t.value), ErrorKind::InvalidInput, "sparse entry is not finite");
    if (t.row < t.col) std::swap(t.row, t.col);
  }
  std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  SparseSymmetric m;
  m.n_ = n;
  for (const auto& t : entries) {
    if (!m.lower_.empty() && m.lower_.back().row == t.row && m.lower_.back().col == t.col) {
      m.lower_.back().value += t.value;
    } else {
      m.lower_.push_back(t);
    }
  }
  std::erase_if(m.lower_, [](const Triplet& t) { return t.value == 0.0; });
  m.build_csr();
  return m;
}

SparseSymmetric SparseSymmetric::identity(std::size_t n) {
  Vec d(n, 1.0);
  return diagonal(d);
}

SparseSymmetric SparseSymmetric::diagonal(std::span<const double> d) {
  std::vector<Triplet> t;
  t.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), d[i]});
  }
  return from_triplets(d.size(), std::move(t));
}

SparseSymmetric SparseSymmetric::from_dense(const DenseMatrix& a, double drop) {
  require(a.rows() == a.cols(), ErrorKind::InvalidInput, "from_dense: matrix must be square");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      if (std::fabs(a(i, j)) > drop)
        t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j), a(i, j)});
  return from_triplets(a.rows(), std::move(t));
}

void SparseSymmetric::build_csr() {
  std::vector<std::int64_t> count(n_ + 1, 0);
  for (const auto& t : lower_) {
    ++count[t.row + 1];
    if (t.row != t.col) ++count[t.col + 1];
  }
  for (std::size_t i = 0; i < n_; ++i) count[i + 1] += count[i];
  row_ptr_ = count;
  col_.assign(static_cast<std::size_t>(row_ptr_[n_]), 0);
  val_.assign(col_.size(), 0.0);
  std::vector<std::int64_t> next(row_ptr_.begin(), row_ptr_.end() - 1);
  // Lower entries are sorted by (row, col), so filling the mirrored upper
  // part first per row keeps every CSR row sorted by column.
  for (const auto& t : lower_) {
    if (t.row != t.col) {
      const auto k = next[t.col]++;
      col_[k] = t.row;
      val_[k] = t.value;
    }
  }
  // Rows now hold their strictly-upper columns (col > row) in ascending
  // order; the lower part must precede them, so rebuild each row.
  std::vector<std::int32_t> cols;
  std::vector<double> vals;
  std::size_t li = 0;
  for (std::size_t r = 0; r < n_; ++r) {
    cols.clear();
    vals.clear();
    while (li < lower_.size() && static_cast<std::size_t>(lower_[li].row) == r) {
      cols.push_back(lower_[li].col);
      vals.push_back(lower_[li].value);
      ++li;
    }
    for (auto k = row_ptr_[r]; k < next[r]; ++k) {
      cols.push_back(col_[k]);
      vals.push_back(val_[k]);
    }
    std::copy(cols.begin(), cols.end(), col_.begin() + row_ptr_[r]);
    std::copy(vals.begin(), vals.end(), val_.begin() + row_ptr_[r]);
  }
}

double SparseSymmetric::density() const noexcept {
  if (n_ == 0) return 0.0;
  return static_cast<double>(val_.size()) / (static_cast<double>(n_) * static_cast<double>(n_));
}

void SparseSymmetric::multiply(std::span<const double> x, std::span<double> y) const {
  require(x.size() == n_ && y.size() == n_, ErrorKind::Precondition,
          "sparse multiply: dimension mismatch");
  simd::csr_matvec(csr(), x, y);
}

Vec SparseSymmetric::multiply(std::span<const double> x) const {
  Vec y(n_);
  multiply(x, y);
  return y;
}

double SparseSymmetric::quad(std::span<const double> x) const {
  double s = 0.0;
  for (const auto& t : lower_) {
    const double p = t.value * x[t.row] * x[t.col];
    s += t.row == t.col ? p : 2.0 * p;
  }
  return s;
}

DenseMatrix SparseSymmetric::to_dense() const {
  DenseMatrix d(n_, n_);
  for (const auto& t : lower_) {
    d(t.row, t.col) = t.value;
    d(t.col, t.row) = t.value;
  }
  return d;
}

Vec SparseSymmetric::diagonal_values() const {
  Vec d(n_, 0.0);
  for (const auto& t : lower_)
    if (t.row == t.col) d[t.row] = t.value;
  return d;
}

double SparseSymmetric::norm_inf() const {
  double m = 0.0;
  for (std::size_t r = 0; r < n_; ++r) {
    double s = 0.0;
    for (auto k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) s += std::fabs(val_[k]);
    m = std::max(m, s);
  }
  return m;
}

SparseSymmetric combine(double a, const SparseSymmetric& A, double b, const SparseSymmetric& B) {
  require(A.n() == B.n(), ErrorKind::Precondition, "combine: dimension mismatch");
  std::vector<Triplet> t;
  t.reserve(A.entries().size() + B.entries().size());
  if (a != 0.0)
    for (auto e : A.entries()) t.push_back({e.row, e.col, a * e.value});
  if (b != 0.0)
    for (auto e : B.entries()) t.push_back({e.row, e.col, b * e.value});
  return SparseSymmetric::from_triplets(A.n(), std::move(t));
}

}  // namespace gtrs
