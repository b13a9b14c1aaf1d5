#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "gtrs/error.hpp"
#include "gtrs/frontends.hpp"
#include "gtrs/linalg.hpp"

namespace gtrs {

const char* to_string(InstanceCase c) {
  switch (c) {
    case InstanceCase::Easy: return "easy";
    case InstanceCase::Hard1: return "hard1";
    case InstanceCase::Hard2: return "hard2";
  }
  return "unknown";
}

InstanceCase parse_instance_case(const std::string& s) {
  if (s == "easy") return InstanceCase::Easy;
  if (s == "hard1") return InstanceCase::Hard1;
  if (s == "hard2") return InstanceCase::Hard2;
  fail(ErrorKind::InvalidInput, "unknown case '" + s + "' (expected easy, hard1 or hard2)");
}

void InstanceSpec::validate() const {
  require(n >= 2, ErrorKind::Validation, "instance: n must be at least 2");
  require(density > 0.0 && density <= 1.0, ErrorKind::Validation, "instance: density must lie in (0, 1]");
  require(cond >= 1.0 && std::isfinite(cond), ErrorKind::Validation, "instance: cond must be at least 1");
}

namespace {

using Rows = std::vector<std::map<int, double>>;

std::size_t nnz(const Rows& rows) {
  std::size_t s = 0;
  for (const auto& r : rows) s += r.size();
  return s;
}

// M <- G M G^T for the rotation acting on coordinates (i, j).
void rotate(Rows& m, int i, int j, double c, double s) {
  std::vector<int> keys;
  for (const auto& [k, v] : m[i]) if (k != i && k != j) keys.push_back(k);
  for (const auto& [k, v] : m[j]) if (k != i && k != j) keys.push_back(k);
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
  auto get = [&](int r, int col) {
    auto it = m[r].find(col);
    return it == m[r].end() ? 0.0 : it->second;
  };
  for (int k : keys) {
    const double a = get(i, k), b = get(j, k);
    const double ni = c * a - s * b, nj = s * a + c * b;
    m[i][k] = m[k][i] = ni;
    m[j][k] = m[k][j] = nj;
  }
  const double aii = get(i, i), ajj = get(j, j), aij = get(i, j);
  const double nii = c * c * aii - 2.0 * c * s * aij + s * s * ajj;
  const double njj = s * s * aii + 2.0 * c * s * aij + c * c * ajj;
  const double nij = c * s * (aii - ajj) + (c * c - s * s) * aij;
  m[i][i] = nii;
  m[j][j] = njj;
  m[i][j] = m[j][i] = nij;
}

SparseSymmetric to_sparse(const Rows& m) {
  std::vector<Triplet> t;
  for (std::size_t r = 0; r < m.size(); ++r)
    for (const auto& [c, v] : m[r])
      if (c <= static_cast<int>(r)) t.push_back({static_cast<std::int32_t>(r), c, v});
  return SparseSymmetric::from_triplets(m.size(), std::move(t));
}

// Log-spaced spectrum in [1, cond], mixed by seeded Givens rotations until
// the fill reaches the density target.
SparseSymmetric spd_matrix(std::size_t n, double density, double cond, std::mt19937_64& rng) {
  Rows m(n);
  for (std::size_t i = 0; i < n; ++i)
    m[i][static_cast<int>(i)] = std::pow(cond, static_cast<double>(i) / static_cast<double>(n - 1));
  std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  const double target = density * static_cast<double>(n) * static_cast<double>(n);
  const std::size_t min_rot = n / 2, max_rot = 20 * n;
  for (std::size_t r = 0; r < max_rot && (r < min_rot || static_cast<double>(nnz(m)) < target); ++r) {
    const int i = pick(rng);
    int j = pick(rng);
    if (j == i) j = (i + 1) % static_cast<int>(n);
    const double th = angle(rng);
    rotate(m, i, j, std::cos(th), std::sin(th));
  }
  return to_sparse(m);
}

SparseSymmetric indefinite_matrix(std::size_t n, double density, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;
  std::vector<Triplet> t;
  std::vector<std::size_t> diag;
  for (std::size_t i = 0; i < n; ++i) {
    diag.push_back(t.size());
    t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(i), normal(rng)});
    for (std::size_t j = 0; j < i; ++j)
      if (unif(rng) < density) t.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j), normal(rng)});
  }
  // Diagonal entries of both signs make the matrix indefinite.
  const bool pos = std::any_of(diag.begin(), diag.end(), [&](std::size_t k) { return t[k].value > 0; });
  const bool neg = std::any_of(diag.begin(), diag.end(), [&](std::size_t k) { return t[k].value < 0; });
  if (!pos) t[diag[0]].value = std::fabs(t[diag[0]].value) + 0.5;
  if (!neg) t[diag[0]].value = -std::fabs(t[diag[0]].value) - 0.5;
  return SparseSymmetric::from_triplets(n, std::move(t));
}

}  // namespace

GeneratedInstance generate_instance(const InstanceSpec& spec) {
  spec.validate();
  const std::size_t n = spec.n;
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif;

  GeneratedInstance out;
  out.ip.A = spd_matrix(n, spec.density, spec.cond, rng);
  out.ip.B = indefinite_matrix(n, spec.density, rng);
  const auto q1 = combine(2.0, out.ip.A, 0.0, out.ip.A);
  const auto q2 = combine(2.0, out.ip.B, 0.0, out.ip.B);

  // Right end of {lambda >= 0 : Q1 + lambda Q2 PSD}; Q1 is definite.
  const auto right = max_gen_eig(combine(-1.0, q2, 0.0, q2), q1, 1e-12 * (q1.norm_inf() + q2.norm_inf()));
  require(right.value > 0.0, ErrorKind::Numerical, "generator: Q2 has no negative curvature");
  out.boundary = 1.0 / right.value;
  out.boundary_null = right.vector;
  const Vec& v = out.boundary_null;

  Vec x(n);
  for (auto& xi : x) xi = normal(rng);
  double lambda = 0.0;
  switch (spec.kind) {
    case InstanceCase::Easy:
      lambda = out.boundary * (0.2 + 0.4 * unif(rng));
      break;
    case InstanceCase::Hard1:
      lambda = out.boundary * (1.0 - 0.02 * (0.5 + unif(rng)));
      break;
    case InstanceCase::Hard2:
      lambda = out.boundary;
      axpy(-dot(v, x), v, x);
      break;
  }
  const auto m = combine(1.0, q1, lambda, q2);
  Vec b1 = m.multiply(x);
  simd::scal(-1.0, b1);
  if (spec.kind == InstanceCase::Hard2) {
    // Exact orthogonality to the null vector, then push x along it far enough
    // that the range part alone violates the constraint.
    axpy(-dot(v, b1), v, b1);
    const Vec q2v = q2.multiply(v);
    const double curv = dot(v, q2v), cross = dot(q2v, x);
    const double beta = (unif(rng) < 0.5 ? -1.0 : 1.0) * (2.0 * std::fabs(cross / curv) + 1.0);
    axpy(beta, v, x);
  }
  const double c = -0.5 * q2.quad(x);

  out.ip.a = lincomb(-0.5, b1, 0.0, b1);
  out.ip.c2 = -c;
  out.ip.c1 = out.ip.c2 - (1.0 + std::fabs(out.ip.c2));
  out.problem = ip_to_problem(out.ip, IpSide::UpperActive);
  out.lambda_star = lambda;
  out.x_star = std::move(x);
  return out;
}

}  // namespace gtrs
