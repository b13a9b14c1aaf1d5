#pragma once

// Shared helpers for the test suites: seeded generators and conversions to
// Eigen, which serves as the independent dense reference.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "gtrs/dense.hpp"
#include "gtrs/problem.hpp"
#include "gtrs/sparse.hpp"

namespace gtrs::testing {

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double normal() { return normal_(rng_); }
  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::size_t index(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  Vec vec(std::size_t n) {
    Vec v(n);
    for (auto& x : v) x = normal();
    return v;
  }

  /// Random sparse symmetric matrix with roughly `density` fill, N(0,1) entries.
  SparseSymmetric sparse_symmetric(std::size_t n, double density, bool with_diag = true) {
    std::vector<Triplet> t;
    for (std::size_t i = 0; i < n; ++i) {
      if (with_diag) t.push_back({static_cast<int>(i), static_cast<int>(i), normal()});
      for (std::size_t j = 0; j < i; ++j)
        if (uniform() < density) t.push_back({static_cast<int>(i), static_cast<int>(j), normal()});
    }
    return SparseSymmetric::from_triplets(n, std::move(t));
  }

  /// Dense SPD matrix Q diag(spectrum) Q^T with a random orthogonal Q.
  DenseMatrix spd_with_spectrum(const Vec& spectrum) {
    const std::size_t n = spectrum.size();
    Eigen::MatrixXd g(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) g(i, j) = normal();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
    Eigen::MatrixXd q = qr.householderQ();
    Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(spectrum.data(), n);
    Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();
    DenseMatrix out(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(i, j) = 0.5 * (a(i, j) + a(j, i));
    return out;
  }

  DenseMatrix random_spd(std::size_t n, double cond) {
    Vec s(n);
    for (std::size_t i = 0; i < n; ++i)
      s[i] = n == 1 ? 1.0 : std::pow(cond, static_cast<double>(i) / static_cast<double>(n - 1));
    return spd_with_spectrum(s);
  }

  std::mt19937_64& engine() { return rng_; }

private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_;
};

inline Eigen::MatrixXd to_eigen(const DenseMatrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m;
}

inline Eigen::MatrixXd to_eigen(const SparseSymmetric& a) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.n(), a.n());
  for (const auto& t : a.entries()) {
    m(t.row, t.col) = t.value;
    m(t.col, t.row) = t.value;
  }
  return m;
}

inline Eigen::VectorXd to_eigen(const Vec& v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), v.size()); }

inline Vec from_eigen(const Eigen::VectorXd& v) { return Vec(v.data(), v.data() + v.size()); }

inline double eigen_min_eig(const Eigen::MatrixXd& a) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

inline double eigen_max_eig(const Eigen::MatrixXd& a) {
  const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(a, Eigen::EigenvaluesOnly).eigenvalues();
  return ev(ev.size() - 1);
}

/// Largest generalized eigenvalue of (M, N), N SPD.
inline double eigen_max_gen_eig(const Eigen::MatrixXd& m, const Eigen::MatrixXd& n) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(m, n, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

inline QuadraticForm form(SparseSymmetric q, Vec b, double c = 0.0) { return {std::move(q), std::move(b), c}; }

/// min 3x1^2 - x2^2/2 - x2  s.t.  -x1^2 + x2^2/2 + x2 + 1 <= 0; optimum 2 at (+-sqrt(2)/2, -1).
inline GtrsProblem worked_example() {
  GtrsProblem p;
  p.f1 = form(SparseSymmetric::diagonal(Vec{6, -1}), Vec{0, -1});
  p.f2 = form(SparseSymmetric::diagonal(Vec{-2, 1}), Vec{0, 1}, 1.0);
  return p;
}

/// Q1 = Q0 - shift*Q2 with Q0 SPD, so the pencil is definite at `shift` and
/// Q1 is typically indefinite. f2 has a strictly feasible point at the origin.
inline GtrsProblem definite_pencil_problem(Gen& g, std::size_t n, double density, double shift = 1.0,
                                           double cond = 10.0) {
  const SparseSymmetric q0 = SparseSymmetric::from_dense(g.random_spd(n, cond));
  const SparseSymmetric q2 = g.sparse_symmetric(n, density);
  GtrsProblem p;
  p.f1 = form(combine(1.0, q0, -shift, q2), g.vec(n));
  p.f2 = form(q2, g.vec(n), -1.0 - g.uniform());
  return p;
}

}  // namespace gtrs::testing
