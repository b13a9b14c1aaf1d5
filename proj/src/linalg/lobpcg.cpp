#include <algorithm>
#include <cmath>
#include <random>

#include "gtrs/error.hpp"
#include "gtrs/linalg.hpp"

namespace gtrs {

namespace {

// One basis column with its images under A and B.
struct Column {
  Vec s, as, bs;
  bool from_x = false;
};

// B-orthonormalises `cols` in place by two passes of Gram-Schmidt, dropping
// columns that become numerically dependent.
void b_orthonormalize(std::vector<Column>& cols) {
  std::vector<Column> kept;
  kept.reserve(cols.size());
  for (auto& c : cols) {
    const double before = std::sqrt(std::max(0.0, dot(c.s, c.bs)));
    if (!(before > 0.0) || !std::isfinite(before)) continue;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : kept) {
        const double h = dot(q.bs, c.s);
        axpy(-h, q.s, c.s);
        axpy(-h, q.as, c.as);
        axpy(-h, q.bs, c.bs);
      }
    }
    const double after = std::sqrt(std::max(0.0, dot(c.s, c.bs)));
    if (!(after > 1e-10 * before) || !std::isfinite(after)) continue;
    const double inv = 1.0 / after;
    simd::scal(inv, c.s);
    simd::scal(inv, c.as);
    simd::scal(inv, c.bs);
    kept.push_back(std::move(c));
  }
  cols = std::move(kept);
}

}  // namespace

LobpcgResult lobpcg(std::size_t n, const Operator& a, const Operator* b, const Operator* t,
                    const LobpcgOptions& opts, const std::vector<Vec>* initial) {
  require(n > 0, ErrorKind::Precondition, "lobpcg: empty problem");
  const std::size_t k = std::min(std::max(opts.block, opts.nev), n);
  const std::size_t nev = std::min(std::max<std::size_t>(opts.nev, 1), k);

  auto apply_b = [&](std::span<const double> x, std::span<double> y) {
    if (b) (*b)(x, y); else std::copy(x.begin(), x.end(), y.begin());
  };
  auto make_column = [&](Vec s, bool from_x) {
    Column c{std::move(s), Vec(n), Vec(n), from_x};
    a(c.s, c.as);
    apply_b(c.s, c.bs);
    return c;
  };

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  std::vector<Column> x;
  for (std::size_t j = 0; j < k; ++j) {
    Vec s(n);
    if (initial && j < initial->size() && (*initial)[j].size() == n) {
      s = (*initial)[j];
    } else {
      for (auto& v : s) v = normal(rng);
    }
    x.push_back(make_column(std::move(s), true));
  }
  b_orthonormalize(x);
  if (x.empty()) fail(ErrorKind::Numerical, "lobpcg: could not form a starting block");

  std::vector<Column> p;
  LobpcgResult out;
  Vec theta(x.size());
  Vec res(x.size());

  for (std::size_t iter = 0;; ++iter) {
    // Rayleigh-Ritz over S = [X, W, P] (X only on the first pass).
    std::vector<Column> s = std::move(x);
    if (iter > 0) {
      for (std::size_t j = 0; j < s.size() && j < res.size(); ++j) {
        if (res[j] <= opts.tol) continue;
        Vec r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = s[j].as[i] - theta[j] * s[j].bs[i];
        Vec w(n);
        if (t) (*t)(r, w); else w = std::move(r);
        s.push_back(make_column(std::move(w), false));
      }
      for (auto& c : p) s.push_back(std::move(c));
      p.clear();
      b_orthonormalize(s);
    }
    const std::size_t m = s.size();
    DenseMatrix g(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j <= i; ++j) g(i, j) = g(j, i) = 0.5 * (dot(s[i].s, s[j].as) + dot(s[j].s, s[i].as));
    const auto eig = symmetric_eigen(g);
    const std::size_t kk = std::min(k, m);

    x.clear();
    theta.assign(kk, 0.0);
    res.assign(kk, 0.0);
    for (std::size_t j = 0; j < kk; ++j) {
      const std::size_t col = m - 1 - j;  // descending Ritz values
      theta[j] = eig.values[col];
      Column xc{Vec(n, 0.0), Vec(n, 0.0), Vec(n, 0.0), true};
      Column pc{Vec(n, 0.0), Vec(n, 0.0), Vec(n, 0.0), false};
      bool has_p = false;
      for (std::size_t i = 0; i < m; ++i) {
        const double c = eig.vectors(i, col);
        if (c == 0.0) continue;
        axpy(c, s[i].s, xc.s);
        if (!s[i].from_x) {
          axpy(c, s[i].s, pc.s);
          axpy(c, s[i].as, pc.as);
          axpy(c, s[i].bs, pc.bs);
          has_p = true;
        }
      }
      // Fresh products for X keep the residuals honest over many iterations.
      a(xc.s, xc.as);
      apply_b(xc.s, xc.bs);
      Vec r(n);
      for (std::size_t i = 0; i < n; ++i) r[i] = xc.as[i] - theta[j] * xc.bs[i];
      res[j] = norm2(r) / norm2(xc.s);
      x.push_back(std::move(xc));
      if (has_p && iter > 0) p.push_back(std::move(pc));
    }

    bool done = true;
    if (opts.stop) {
      done = opts.stop(theta, res);
    } else {
      for (std::size_t j = 0; j < std::min(nev, kk); ++j) done = done && res[j] <= opts.tol;
    }
    out.iterations = iter + 1;
    if (done || iter + 1 >= opts.max_iter || kk == 0) {
      out.converged = done && kk > 0;
      break;
    }
    if (m >= n && iter > 0) {
      // The basis spans the whole space; more iterations cannot help.
      out.converged = done;
      break;
    }
  }

  out.values = theta;
  out.residuals = res;
  for (auto& c : x) {
    normalize(c.s);
    out.vectors.push_back(std::move(c.s));
  }
  return out;
}

}  // namespace gtrs
