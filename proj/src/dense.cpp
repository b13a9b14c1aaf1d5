#include "gtrs/dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gtrs/error.hpp"

namespace gtrs {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Vec DenseMatrix::column(std::size_t c) const {
  Vec v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

void DenseMatrix::set_column(std::size_t c, std::span<const double> v) {
  for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

Vec DenseMatrix::multiply(std::span<const double> x) const {
  require(x.size() == cols_, ErrorKind::Precondition, "DenseMatrix::multiply: size mismatch");
  Vec y(rows_);
  for (std::size_t r = 0; r < rows_; ++r) y[r] = simd::dot(row(r), x);
  return y;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
  return t;
}

DenseMatrix DenseMatrix::operator*(const DenseMatrix& other) const {
  require(cols_ == other.rows_, ErrorKind::Precondition, "DenseMatrix product: size mismatch");
  DenseMatrix out(rows_, other.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto dst = out.row(r);
    for (std::size_t k = 0; k < cols_; ++k) {
      const double a = (*this)(r, k);
      if (a != 0.0) simd::axpy(a, other.row(k), dst);
    }
  }
  return out;
}

std::optional<CholeskyFactor> CholeskyFactor::factor(const DenseMatrix& a, double min_pivot) {
  require(a.rows() == a.cols(), ErrorKind::Precondition, "Cholesky: matrix must be square");
  const std::size_t n = a.rows();
  CholeskyFactor f;
  f.l_ = DenseMatrix(n, n);
  f.min_pivot_ = n ? std::numeric_limits<double>::infinity() : 0.0;
  DenseMatrix& l = f.l_;
  for (std::size_t i = 0; i < n; ++i) {
    auto li = l.row(i);
    for (std::size_t j = 0; j < i; ++j) {
      const double s = simd::dot(li.first(j), l.row(j).first(j));
      li[j] = (a(i, j) - s) / l(j, j);
    }
    const double d = a(i, i) - simd::nrm2sq(li.first(i));
    if (!(d > min_pivot)) return std::nullopt;
    li[i] = std::sqrt(d);
    f.min_pivot_ = std::min(f.min_pivot_, d);
  }
  return f;
}

void CholeskyFactor::solve_lower(std::span<double> b) const {
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    b[i] = (b[i] - simd::dot(l_.row(i).first(i), b.first(i))) / l_(i, i);
  }
}

void CholeskyFactor::solve_upper(std::span<double> b) const {
  for (std::size_t i = size(); i-- > 0;) {
    b[i] /= l_(i, i);
    if (i > 0) simd::axpy(-b[i], l_.row(i).first(i), b.first(i));
  }
}

void CholeskyFactor::solve(std::span<double> b) const {
  solve_lower(b);
  solve_upper(b);
}

namespace {

// Householder reduction to tridiagonal form (EISPACK tred2 lineage). On exit
// d holds the diagonal, e the sub-diagonal in e[1..n-1], and v the
// accumulated orthogonal transform when want_vectors is set.
void tridiagonalize(std::size_t n, std::vector<double>& v, Vec& d, Vec& e, bool want_vectors) {
  auto V = [&](std::size_t r, std::size_t c) -> double& { return v[r * n + c]; };
  for (std::size_t j = 0; j < n; ++j) d[j] = V(n - 1, j);

  for (std::size_t i = n - 1; i > 0; --i) {
    double scale = 0.0;
    double h = 0.0;
    for (std::size_t k = 0; k < i; ++k) scale += std::fabs(d[k]);
    if (scale == 0.0) {
      e[i] = d[i - 1];
      for (std::size_t j = 0; j < i; ++j) {
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
        V(j, i) = 0.0;
      }
    } else {
      for (std::size_t k = 0; k < i; ++k) {
        d[k] /= scale;
        h += d[k] * d[k];
      }
      double f = d[i - 1];
      double g = std::sqrt(h);
      if (f > 0) g = -g;
      e[i] = scale * g;
      h -= f * g;
      d[i - 1] = f - g;
      for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;

      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        V(j, i) = f;
        g = e[j] + V(j, j) * f;
        for (std::size_t k = j + 1; k <= i - 1; ++k) {
          g += V(k, j) * d[k];
          e[k] += V(k, j) * f;
        }
        e[j] = g;
      }
      f = 0.0;
      for (std::size_t j = 0; j < i; ++j) {
        e[j] /= h;
        f += e[j] * d[j];
      }
      const double hh = f / (h + h);
      for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
      for (std::size_t j = 0; j < i; ++j) {
        f = d[j];
        g = e[j];
        for (std::size_t k = j; k <= i - 1; ++k) V(k, j) -= (f * e[k] + g * d[k]);
        d[j] = V(i - 1, j);
        V(i, j) = 0.0;
      }
    }
    d[i] = h;
  }

  if (!want_vectors) {
    for (std::size_t j = 0; j < n; ++j) d[j] = V(j, j);
    e[0] = 0.0;
    return;
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    V(n - 1, i) = V(i, i);
    V(i, i) = 1.0;
    const double h = d[i + 1];
    if (h != 0.0) {
      for (std::size_t k = 0; k <= i; ++k) d[k] = V(k, i + 1) / h;
      for (std::size_t j = 0; j <= i; ++j) {
        double g = 0.0;
        for (std::size_t k = 0; k <= i; ++k) g += V(k, i + 1) * V(k, j);
        for (std::size_t k = 0; k <= i; ++k) V(k, j) -= g * d[k];
      }
    }
    for (std::size_t k = 0; k <= i; ++k) V(k, i + 1) = 0.0;
  }
  for (std::size_t j = 0; j < n; ++j) {
    d[j] = V(n - 1, j);
    V(n - 1, j) = 0.0;
  }
  V(n - 1, n - 1) = 1.0;
  e[0] = 0.0;
}

// Implicit QL on the tridiagonal (d, e); rotations are applied to v.
void tridiagonal_ql(std::size_t n, std::vector<double>& v, Vec& d, Vec& e, bool want_vectors) {
  auto V = [&](std::size_t r, std::size_t c) -> double& { return v[r * n + c]; };
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  double f = 0.0;
  double tst1 = 0.0;
  const double eps = std::ldexp(1.0, -52);
  for (std::size_t l = 0; l < n; ++l) {
    tst1 = std::max(tst1, std::fabs(d[l]) + std::fabs(e[l]));
    std::size_t m = l;
    while (m < n) {
      if (std::fabs(e[m]) <= eps * tst1) break;
      ++m;
    }
    if (m == n) m = n - 1;
    if (m > l) {
      int iter = 0;
      do {
        if (++iter > 200) fail(ErrorKind::Numerical, "symmetric_eigen: QL iteration did not converge");
        double g = d[l];
        double p = (d[l + 1] - g) / (2.0 * e[l]);
        double r = std::hypot(p, 1.0);
        if (p < 0) r = -r;
        d[l] = e[l] / (p + r);
        d[l + 1] = e[l] * (p + r);
        const double dl1 = d[l + 1];
        double h = g - d[l];
        for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
        f += h;

        p = d[m];
        double c = 1.0, c2 = 1.0, c3 = 1.0;
        const double el1 = e[l + 1];
        double s = 0.0, s2 = 0.0;
        for (std::size_t i = m; i-- > l;) {
          c3 = c2;
          c2 = c;
          s2 = s;
          g = c * e[i];
          h = c * p;
          r = std::hypot(p, e[i]);
          e[i + 1] = s * r;
          s = e[i] / r;
          c = p / r;
          p = c * d[i] - s * g;
          d[i + 1] = h + s * (c * g + s * d[i]);
          if (want_vectors) {
            for (std::size_t k = 0; k < n; ++k) {
              h = V(k, i + 1);
              V(k, i + 1) = s * V(k, i) + c * h;
              V(k, i) = c * V(k, i) - s * h;
            }
          }
        }
        p = -s * s2 * c3 * el1 * e[l] / dl1;
        e[l] = s * p;
        d[l] = c * p;
      } while (std::fabs(e[l]) > eps * tst1);
    }
    d[l] += f;
    e[l] = 0.0;
  }
}

}  // namespace

SymmetricEigen symmetric_eigen(const DenseMatrix& a, bool want_vectors) {
  require(a.rows() == a.cols(), ErrorKind::Precondition, "symmetric_eigen: matrix must be square");
  const std::size_t n = a.rows();
  SymmetricEigen out;
  if (n == 0) return out;
  std::vector<double> v(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) v[i * n + j] = v[j * n + i] = a(i, j);

  Vec d(n), e(n);
  if (n == 1) {
    d[0] = v[0];
    v[0] = 1.0;
  } else {
    tridiagonalize(n, v, d, e, want_vectors);
    tridiagonal_ql(n, v, d, e, want_vectors);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });

  out.values.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
  if (want_vectors) {
    out.vectors = DenseMatrix(n, n);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) = v[r * n + order[k]];
  }
  return out;
}

}  // namespace gtrs
