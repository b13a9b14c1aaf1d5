#include <gtest/gtest.h>

#include <cmath>

#include "gtrs/error.hpp"
#include "gtrs/recovery.hpp"
#include "test_support.hpp"

using namespace gtrs;
using gtrs::testing::Gen;
using gtrs::testing::form;

namespace {

const double kRoot = std::sqrt(0.5);

Reformulation worked_reform(const GtrsProblem& p) { return build_reformulation(p, compute_interval(p, 2.0)); }

GtrsProblem unit_ball_problem() {
  GtrsProblem p;
  p.f1 = form(SparseSymmetric::identity(2), Vec{0, 0});
  p.f2 = form(SparseSymmetric::identity(2), Vec{0, 0}, -0.5);
  return p;
}

}  // namespace

TEST(RecoverSolution, WorkedExampleMovesAlongNullDirection) {
  const auto p = gtrs::testing::worked_example();
  const auto r = worked_reform(p);
  const auto rep = recover_solution(p, r, Vec{0, -1});
  ASSERT_TRUE(rep.theta.has_value());
  EXPECT_NEAR(std::fabs(*rep.theta), kRoot, 1e-12);
  EXPECT_NEAR(std::fabs(rep.x[0]), kRoot, 1e-12);
  EXPECT_NEAR(rep.x[1], -1.0, 1e-12);
  EXPECT_NEAR(rep.objective, 2.0, 1e-12);
  EXPECT_NEAR(rep.constraint_residual, 0.0, 1e-12);
  EXPECT_NEAR(rep.multiplier, 3.0, 1e-10);
  EXPECT_TRUE(rep.recovery_direction_used);
}

TEST(RecoverSolution, BothRootsAreOptimal) {
  const auto p = gtrs::testing::worked_example();
  for (double s : {-1.0, 1.0}) {
    const Vec x{s * kRoot, -1.0};
    EXPECT_NEAR(p.f1.evaluate(x), 2.0, 1e-14);
    EXPECT_NEAR(p.f2.evaluate(x), 0.0, 1e-14);
  }
}

TEST(RecoverSolution, EqualValuesReturnInput) {
  const auto p = gtrs::testing::worked_example();
  const auto r = worked_reform(p);
  const Vec x{kRoot, -1.0};
  const auto rep = recover_solution(p, r, x);
  EXPECT_EQ(rep.x, x);
  EXPECT_FALSE(rep.theta.has_value());
  EXPECT_NEAR(rep.objective, 2.0, 1e-12);
}

TEST(RecoverSolution, RequiresTwoConvex) {
  Reformulation r;
  r.variant = ReformVariant::Interior;
  EXPECT_THROW(recover_solution(gtrs::testing::worked_example(), r, Vec{0, 0}), Error);
}

TEST(NewtonRefine, UnitCircleStep) {
  const auto x = newton_refine(unit_ball_problem(), Vec{1.1, 0}, true);
  EXPECT_NEAR(x[0], 1.1 - 0.105 / 1.21 * 1.1, 1e-15);
  EXPECT_NEAR(x[0], 1.004545, 1e-6);
  EXPECT_EQ(x[1], 0.0);
  EXPECT_NEAR(unit_ball_problem().f2.evaluate(x), 0.00456, 1e-5);
}

TEST(NewtonRefine, NoOpCases) {
  const auto p = unit_ball_problem();
  EXPECT_EQ(newton_refine(p, Vec{1, 0}, true), (Vec{1, 0}));
  EXPECT_EQ(newton_refine(p, Vec{1.1, 0}, false), (Vec{1.1, 0}));
  EXPECT_EQ(newton_refine(p, Vec{0, 0}, true), (Vec{0, 0}));  // f2 < 0 but gradient vanishes
  const auto w = gtrs::testing::worked_example();
  const auto x = newton_refine(w, Vec{kRoot, -1.0}, true);
  EXPECT_NEAR(x[0], kRoot, 1e-12);
  EXPECT_NEAR(x[1], -1.0, 1e-12);
}

TEST(NewtonRefine, NeverIncreasesResidual) {
  Gen g(11);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = gtrs::testing::definite_pencil_problem(g, 8, 0.3);
    const Vec x = g.vec(8);
    const auto y = newton_refine(p, x, true);
    EXPECT_LE(std::fabs(p.f2.evaluate(y)), std::fabs(p.f2.evaluate(x)));
  }
}

TEST(HardCase2, ParabolaPairOptimumAtOrigin) {
  const auto h1 = form(SparseSymmetric::diagonal(Vec{2, 0}), Vec{0, 0});
  const auto h2 = form(SparseSymmetric::diagonal(Vec{2, 2}), Vec{2, 0}, 0.0);
  const auto pt = hard_case2_point(h1, h2, {Vec{0, 1}}, true);
  ASSERT_TRUE(pt.has_value());
  EXPECT_NEAR(pt->x[0], 0.0, 1e-14);
  EXPECT_NEAR(pt->x[1], 0.0, 1e-14);
  EXPECT_NEAR(pt->value, 0.0, 1e-14);
}

TEST(HardCase2, WorkedExampleRightEndpoint) {
  const auto p = gtrs::testing::worked_example();
  const auto iv = compute_interval(p, 2.0);
  const auto rep = hard_case2_attempt(p, iv, Boundary::Right);
  ASSERT_TRUE(rep.has_value());
  EXPECT_EQ(rep->case_tag, CaseTag::Hard2);
  EXPECT_NEAR(rep->objective, 2.0, 1e-12);
  EXPECT_NEAR(std::fabs(rep->x[0]), kRoot, 1e-12);
  EXPECT_NEAR(rep->x[1], -1.0, 1e-12);
  EXPECT_NEAR(rep->constraint_residual, 0.0, 1e-12);
  // Left endpoint: the other function stays above the minimum there.
  EXPECT_FALSE(hard_case2_attempt(p, iv, Boundary::Left).has_value());
}

TEST(HardCase2, GenericInstancesAreAbsent) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Gen g(seed);
    const auto p = gtrs::testing::definite_pencil_problem(g, 30, 0.2, 1.0);
    const auto iv = compute_interval(p, 1.0);
    EXPECT_FALSE(hard_case2_attempt(p, iv, Boundary::Left).has_value());
    EXPECT_FALSE(hard_case2_attempt(p, iv, Boundary::Right).has_value());
  }
}

TEST(RecoverConvexConstraint, InactiveConstraintPushedToBoundary) {
  // f1 = -x1^2/2 + x2^2, f2 = x1^2/2 + x2^2/2 - 1/2: lambda3 = 1, h = x2^2*3/2 - 1/2.
  GtrsProblem p;
  p.f1 = form(SparseSymmetric::diagonal(Vec{-1, 2}), Vec{0, 0});
  p.f2 = form(SparseSymmetric::identity(2), Vec{0, 0}, -0.5);
  const auto s = find_lambda0(p);
  const auto r = build_reformulation(p, compute_interval(p, s.lambda0));
  ASSERT_EQ(r.variant, ReformVariant::ConvexConstraint);
  const auto rep = recover_convex_constraint(p, r, Vec{0.2, 0}, 0.0);
  EXPECT_NEAR(std::fabs(rep.x[0]), 1.0, 1e-10);
  EXPECT_NEAR(rep.constraint_residual, 0.0, 1e-12);
  EXPECT_NEAR(rep.objective, -0.5, 1e-10);
  EXPECT_NEAR(rep.multiplier, 1.0, 1e-10);
}
