#include <gtest/gtest.h>

#include <cmath>

#include "gtrs/cqr.hpp"
#include "gtrs/error.hpp"
#include "test_support.hpp"

using namespace gtrs;
using gtrs::testing::Gen;
using gtrs::testing::form;
using gtrs::testing::to_eigen;

namespace {

void expect_form(const QuadraticForm& q, const Vec& diag, const Vec& b, double c) {
  const auto d = to_eigen(q.Q);
  for (std::size_t i = 0; i < diag.size(); ++i) {
    for (std::size_t j = 0; j < diag.size(); ++j) EXPECT_NEAR(d(i, j), i == j ? diag[i] : 0.0, 1e-12);
    EXPECT_NEAR(q.b[i], b[i], 1e-12);
  }
  EXPECT_NEAR(q.c, c, 1e-12);
}

Reformulation reform_of(const GtrsProblem& p, bool split = false) {
  const auto s = find_lambda0(p);
  return build_reformulation(p, compute_interval(p, s.lambda0), split);
}

}  // namespace

TEST(BuildReformulation, WorkedExampleEndpointPair) {
  const auto p = gtrs::testing::worked_example();
  const auto r = build_reformulation(p, compute_interval(p, 2.0));
  ASSERT_EQ(r.variant, ReformVariant::TwoConvex);
  EXPECT_NEAR(r.lambda_left, 1.0, 1e-10);
  EXPECT_NEAR(r.lambda_right, 3.0, 1e-10);
  expect_form(r.h_left, {4, 0}, {0, 0}, 1.0);
  expect_form(r.h_right, {0, 2}, {0, 2}, 3.0);
  EXPECT_GE(r.L, 4.0);
  EXPECT_LE(r.L, 4.1 + 1e-12);
}

TEST(BuildReformulation, WorkedExampleGammaSplit) {
  const auto p = gtrs::testing::worked_example();
  const auto r = build_reformulation(p, compute_interval(p, 2.0), true);
  ASSERT_EQ(r.variant, ReformVariant::TwoConvex);
  EXPECT_EQ(r.lambda_left, 2.0);
  EXPECT_NEAR(r.lambda_right, 3.0, 1e-10);
}

TEST(BuildReformulation, FeasibleUnconstrainedMinimizerIsInterior) {
  GtrsProblem p;
  p.f1 = form(SparseSymmetric::diagonal(Vec{1, 2}), Vec{0, 0});
  p.f2 = form(SparseSymmetric::diagonal(Vec{1, -1}), Vec{0, 0}, -1.0);
  const auto r = reform_of(p, true);
  ASSERT_EQ(r.variant, ReformVariant::Interior);
  EXPECT_EQ(norm2(r.x_interior), 0.0);
}

TEST(BuildReformulation, PsdConstraintGivesConvexConstraint) {
  GtrsProblem p;
  p.f1 = form(SparseSymmetric::diagonal(Vec{-1, 2}), Vec{1, 0});
  p.f2 = form(SparseSymmetric::diagonal(Vec{1, 1}), Vec{0, 0}, -0.5);
  const auto r = reform_of(p);
  ASSERT_EQ(r.variant, ReformVariant::ConvexConstraint);
  EXPECT_GE(r.lambda_left, 1.0 - 1e-10);
  EXPECT_EQ(to_eigen(r.h_right.Q), to_eigen(p.f2.Q));
  EXPECT_GE(gtrs::testing::eigen_min_eig(to_eigen(r.h_left.Q)), -1e-10);

  p.sense = ConstraintSense::Equality;
  try {
    reform_of(p);
    FAIL() << "expected Unsupported";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
}

TEST(BuildReformulation, EmptyIntervalIsUnbounded) {
  PencilInterval iv;
  iv.condition = IntervalCondition::Empty;
  try {
    build_reformulation(gtrs::testing::worked_example(), iv);
    FAIL() << "expected Unbounded";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
  }
}

TEST(BuildReformulation, SingletonIsFlagged) {
  PencilInterval iv;
  iv.condition = IntervalCondition::Singleton;
  EXPECT_EQ(build_reformulation(gtrs::testing::worked_example(), iv).variant, ReformVariant::UnsupportedSingleton);
}

// Both Hessians PSD; every null direction of one Hessian is curved in the other.
TEST(BuildReformulation, HessiansPsdAndJointlyDefinite) {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    Gen g(seed);
    const auto p = gtrs::testing::definite_pencil_problem(g, 25, 0.2, 1.5);
    const auto r = reform_of(p);
    ASSERT_EQ(r.variant, ReformVariant::TwoConvex);
    const auto a1 = to_eigen(r.h_left.Q), a2 = to_eigen(r.h_right.Q);
    const double scale = a1.norm() + a2.norm();
    EXPECT_GE(gtrs::testing::eigen_min_eig(a1), -1e-8 * scale);
    EXPECT_GE(gtrs::testing::eigen_min_eig(a2), -1e-8 * scale);
    for (const auto* pair : {&a1, &a2}) {
      const auto& self = *pair;
      const auto& other = pair == &a1 ? a2 : a1;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(self);
      for (int k = 0; k < es.eigenvalues().size(); ++k) {
        if (std::fabs(es.eigenvalues()(k)) > 1e-8 * scale) continue;
        const Eigen::VectorXd d = es.eigenvectors().col(k);
        EXPECT_GE(d.dot(other * d), 1e-10);
      }
    }
  }
}

TEST(EstimateL, WorkedExampleHessians) {
  Reformulation r;
  r.variant = ReformVariant::TwoConvex;
  r.h_left = form(SparseSymmetric::diagonal(Vec{4, 0}), Vec{0, 0});
  r.h_right = form(SparseSymmetric::diagonal(Vec{0, 2}), Vec{0, 0});
  const double L = estimate_L(r);
  EXPECT_GE(L, 4.0);
  EXPECT_LE(L, 4.1);
}

TEST(EstimateL, Identity) {
  Reformulation r;
  r.variant = ReformVariant::TwoConvex;
  r.h_left = r.h_right = form(SparseSymmetric::identity(3), Vec(3, 0.0));
  const double L = estimate_L(r);
  EXPECT_GE(L, 1.0);
  EXPECT_LE(L, 1.1);
}

class EstimateLProperty : public ::testing::TestWithParam<std::size_t> {};

TEST_P(EstimateLProperty, BracketsTrueMaximum) {
  const std::size_t n = GetParam();
  Gen g(n);
  Reformulation r;
  r.variant = ReformVariant::TwoConvex;
  r.h_left = form(SparseSymmetric::from_dense(g.random_spd(n, 50.0)), Vec(n, 0.0));
  r.h_right = form(combine(3.0, SparseSymmetric::from_dense(g.random_spd(n, 20.0)), 0.0, r.h_left.Q), Vec(n, 0.0));
  const double truth = std::max(gtrs::testing::eigen_max_eig(to_eigen(r.h_left.Q)),
                                gtrs::testing::eigen_max_eig(to_eigen(r.h_right.Q)));
  const double L = estimate_L(r);
  EXPECT_GE(L, truth);
  EXPECT_LE(L, truth + 0.1 + 1e-8);
}

INSTANTIATE_TEST_SUITE_P(Sizes, EstimateLProperty, ::testing::Values(200, 400));
