#include <algorithm>
#include <cmath>

#include "gtrs/error.hpp"
#include "gtrs/linalg.hpp"

namespace gtrs {

namespace {

// IC(0) on the lower pattern of a + shift*diag(a). Returns false on a
// non-positive pivot.
bool incomplete_cholesky(const SparseSymmetric& a, double shift, std::vector<std::int64_t>& ptr,
                         std::vector<std::int32_t>& col, std::vector<double>& val) {
  const std::size_t n = a.n();
  const auto& e = a.entries();
  ptr.assign(n + 1, 0);
  col.clear();
  val.clear();
  std::vector<bool> has_diag(n, false);
  for (const auto& t : e) {
    ++ptr[t.row + 1];
    if (t.row == t.col) has_diag[t.row] = true;
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!has_diag[i]) return false;
    ptr[i + 1] += ptr[i];
  }
  col.resize(e.size());
  val.resize(e.size());
  for (std::size_t k = 0; k < e.size(); ++k) {
    col[k] = e[k].col;
    val[k] = e[k].row == e[k].col ? e[k].value * (1.0 + shift) : e[k].value;
  }
  // Row-oriented factorisation; `pos` maps a column of the current row to
  // its slot so the sparse dot products stay within the pattern.
  std::vector<std::int64_t> pos(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    const auto begin = ptr[i], end = ptr[i + 1];
    for (auto k = begin; k < end; ++k) pos[col[k]] = k;
    for (auto k = begin; k < end - 1; ++k) {
      const auto j = static_cast<std::size_t>(col[k]);
      double s = val[k];
      for (auto m = ptr[j]; m < ptr[j + 1] - 1; ++m) {
        const auto p = pos[col[m]];
        if (p >= 0 && p < k) s -= val[p] * val[m];
      }
      val[k] = s / val[ptr[j + 1] - 1];
    }
    double d = val[end - 1];
    for (auto k = begin; k < end - 1; ++k) d -= val[k] * val[k];
    for (auto k = begin; k < end; ++k) pos[col[k]] = -1;
    if (!(d > 0.0) || !std::isfinite(d)) return false;
    val[end - 1] = std::sqrt(d);
  }
  return true;
}

}  // namespace

std::shared_ptr<const Preconditioner> Preconditioner::build(const SparseSymmetric& a,
                                                            std::size_t dense_limit) {
  auto p = std::make_shared<Preconditioner>();
  p->n_ = a.n();
  if (a.n() <= dense_limit) {
    if (auto f = CholeskyFactor::factor(a.to_dense())) {
      p->kind_ = Kind::DenseCholesky;
      p->dense_ = std::move(*f);
      return p;
    }
  }
  for (double shift : {0.0, 1e-3, 1e-2, 1e-1, 1.0}) {
    if (incomplete_cholesky(a, shift, p->ptr_, p->col_, p->val_)) {
      p->kind_ = Kind::IncompleteCholesky;
      return p;
    }
  }
  p->ptr_.clear();
  p->col_.clear();
  p->val_.clear();
  p->kind_ = Kind::Jacobi;
  p->inv_diag_ = a.diagonal_values();
  for (double& d : p->inv_diag_) d = std::fabs(d) > 0.0 ? 1.0 / std::fabs(d) : 1.0;
  return p;
}

void Preconditioner::apply(std::span<const double> r, std::span<double> z) const {
  std::copy(r.begin(), r.end(), z.begin());
  switch (kind_) {
    case Kind::DenseCholesky:
      dense_->solve(z);
      return;
    case Kind::Jacobi:
      for (std::size_t i = 0; i < n_; ++i) z[i] *= inv_diag_[i];
      return;
    case Kind::IncompleteCholesky:
      break;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    const auto end = ptr_[i + 1] - 1;
    double s = z[i];
    for (auto k = ptr_[i]; k < end; ++k) s -= val_[k] * z[col_[k]];
    z[i] = s / val_[end];
  }
  for (std::size_t i = n_; i-- > 0;) {
    const auto end = ptr_[i + 1] - 1;
    z[i] /= val_[end];
    const double zi = z[i];
    for (auto k = ptr_[i]; k < end; ++k) z[col_[k]] -= val_[k] * zi;
  }
}

Operator Preconditioner::as_operator() const {
  return [this](std::span<const double> r, std::span<double> z) { apply(r, z); };
}

}  // namespace gtrs
