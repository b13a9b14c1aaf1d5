#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "gtrs/error.hpp"
#include "gtrs/frontends.hpp"
#include "test_support.hpp"

using namespace gtrs;
using gtrs::testing::Gen;
using gtrs::testing::form;

namespace fs = std::filesystem;

namespace {

IntervalProblem tiny_ip(double c1, double c2) {
  IntervalProblem ip;
  ip.A = SparseSymmetric::identity(2);
  ip.a = {0.0, 0.0};
  ip.B = SparseSymmetric::diagonal(Vec{1.0, -1.0});
  ip.c1 = c1;
  ip.c2 = c2;
  return ip;
}

double rel_err(double a, double b) { return std::fabs(a - b) / std::max(1.0, std::fabs(b)); }

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("gtrs_test_" + name);
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST(ClassifyIp, StatedExamples) {
  EXPECT_EQ(classify_ip(tiny_ip(-1, 1)).side, IpSide::Interior);
  EXPECT_EQ(classify_ip(tiny_ip(1, 2)).side, IpSide::LowerActive);
  EXPECT_EQ(classify_ip(tiny_ip(-2, -1)).side, IpSide::UpperActive);
  const auto c = classify_ip(tiny_ip(-1, 1));
  EXPECT_DOUBLE_EQ(c.value, 0.0);
  EXPECT_DOUBLE_EQ(norm2(c.x0), 0.0);
}

TEST(ClassifyIp, TrichotomyOnDecisionValue) {
  Gen g(91);
  for (int draw = 0; draw < 1000; ++draw) {
    const std::size_t n = 2 + g.index(6);
    IntervalProblem ip;
    ip.A = SparseSymmetric::from_dense(g.random_spd(n, 1.0 + 9.0 * g.uniform()));
    ip.a = g.vec(n);
    ip.B = g.sparse_symmetric(n, 0.5);
    const double lo = 3.0 * g.normal(), hi = lo + 3.0 * g.uniform();
    ip.c1 = lo;
    ip.c2 = hi;
    const auto c = classify_ip(ip);
    const int hits = (c.value < lo) + (c.value >= lo && c.value <= hi) + (c.value > hi);
    ASSERT_EQ(hits, 1);
    const IpSide expect = c.value < lo ? IpSide::LowerActive : c.value > hi ? IpSide::UpperActive : IpSide::Interior;
    ASSERT_EQ(c.side, expect) << "draw " << draw;
    EXPECT_NEAR(c.value, ip.B.quad(c.x0), 1e-12 * (1.0 + std::fabs(c.value)));
  }
}

TEST(IpToProblem, SidesMapToOneSidedConstraints) {
  const auto ip = tiny_ip(1, 2);
  const Vec x{0.3, -0.7};
  const auto up = ip_to_problem(ip, IpSide::UpperActive);
  const auto low = ip_to_problem(ip, IpSide::LowerActive);
  EXPECT_NEAR(up.f2.evaluate(x), ip.B.quad(x) - 2.0, 1e-15);
  EXPECT_NEAR(low.f2.evaluate(x), 1.0 - ip.B.quad(x), 1e-15);
  EXPECT_NEAR(up.f1.evaluate(x), ip.A.quad(x), 1e-15);
  EXPECT_THROW(ip_to_problem(ip, IpSide::Interior), Error);
}

TEST(Generator, SameSeedSameInstance) {
  InstanceSpec s{100, 0.05, 10.0, InstanceCase::Easy, 7};
  const auto a = generate_instance(s), b = generate_instance(s);
  ASSERT_EQ(a.ip.A.entries().size(), b.ip.A.entries().size());
  for (std::size_t k = 0; k < a.ip.A.entries().size(); ++k)
    EXPECT_EQ(a.ip.A.entries()[k].value, b.ip.A.entries()[k].value);
  ASSERT_EQ(a.ip.B.entries().size(), b.ip.B.entries().size());
  for (std::size_t k = 0; k < a.ip.B.entries().size(); ++k)
    EXPECT_EQ(a.ip.B.entries()[k].value, b.ip.B.entries()[k].value);
  EXPECT_EQ(a.ip.a, b.ip.a);
  EXPECT_EQ(a.ip.c2, b.ip.c2);
}

TEST(Generator, ConditionNumberAndDensity) {
  for (double cond : {10.0, 100.0, 1000.0}) {
    const auto inst = generate_instance({100, 0.05, cond, InstanceCase::Easy, 3});
    const auto ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(gtrs::testing::to_eigen(inst.ip.A)).eigenvalues();
    const double k = ev(ev.size() - 1) / ev(0);
    EXPECT_GE(k, 0.9 * cond);
    EXPECT_LE(k, 1.1 * cond);
    EXPECT_GE(inst.ip.A.density(), 0.05);
    EXPECT_LT(gtrs::testing::eigen_min_eig(gtrs::testing::to_eigen(inst.ip.B)), 0.0);
    EXPECT_GT(gtrs::testing::eigen_max_eig(gtrs::testing::to_eigen(inst.ip.B)), 0.0);
  }
}

TEST(Generator, PlantedPointIsFeasibleKkt) {
  for (auto kind : {InstanceCase::Easy, InstanceCase::Hard1, InstanceCase::Hard2}) {
    const auto inst = generate_instance({40, 0.2, 10.0, kind, 11});
    const auto& p = inst.problem;
    EXPECT_NEAR(p.f2.evaluate(inst.x_star), 0.0, 1e-10);
    Vec r = p.f1.gradient(inst.x_star);
    axpy(inst.lambda_star, p.f2.gradient(inst.x_star), r);
    EXPECT_LE(norm2(r), 1e-9 * (1.0 + norm2(p.f1.b)));
    EXPECT_GT(inst.lambda_star, 0.0);
    EXPECT_LE(inst.lambda_star, inst.boundary);
  }
}

TEST(Generator, HardCase2IsOrthogonalAndEasyIsNot) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto hard = generate_instance({60, 0.1, 10.0, InstanceCase::Hard2, seed});
    const auto& b1 = hard.problem.f1.b;
    EXPECT_LE(std::fabs(dot(hard.boundary_null, b1)), 1e-12 * norm2(b1));
    // Verified against an independently computed null basis.
    const auto m = combine(1.0, hard.problem.f1.Q, hard.boundary, hard.problem.f2.Q);
    const auto basis = null_space_basis(m, 1e-8);
    ASSERT_FALSE(basis.empty());
    for (const auto& v : basis) EXPECT_LE(std::fabs(dot(v, b1)), 1e-9 * norm2(b1));

    const auto easy = generate_instance({60, 0.1, 10.0, InstanceCase::Easy, seed});
    EXPECT_GT(std::fabs(dot(easy.boundary_null, easy.problem.f1.b)), 1e-6 * norm2(easy.problem.f1.b));
  }
}

TEST(Generator, RejectsInvalidSpec) {
  EXPECT_THROW(generate_instance({1, 0.1, 10.0}), Error);
  EXPECT_THROW(generate_instance({10, 0.0, 10.0}), Error);
  EXPECT_THROW(generate_instance({10, 1.5, 10.0}), Error);
  EXPECT_THROW(generate_instance({10, 0.1, 0.5}), Error);
  EXPECT_EQ(parse_instance_case("hard2"), InstanceCase::Hard2);
  EXPECT_THROW(parse_instance_case("medium"), Error);
}

TEST(Oracle, WorkedExample) {
  const auto r = oracle_solve(gtrs::testing::worked_example());
  EXPECT_NEAR(r.value, 2.0, 1e-12);
  EXPECT_NEAR(std::fabs(r.x[0]), std::sqrt(0.5), 1e-9);
  EXPECT_NEAR(r.x[1], -1.0, 1e-9);
  EXPECT_NEAR(r.multiplier, 3.0, 1e-9);
  EXPECT_TRUE(r.hard_case);
}

TEST(Oracle, InteriorMinimiser) {
  GtrsProblem p;
  p.f1 = form(SparseSymmetric::diagonal(Vec{2, 4}), Vec{-2, 4});
  p.f2 = form(SparseSymmetric::diagonal(Vec{1, -1}), Vec{0, 0}, -10.0);
  const auto r = oracle_solve(p);
  EXPECT_EQ(r.multiplier, 0.0);
  EXPECT_NEAR(r.x[0], 1.0, 1e-14);
  EXPECT_NEAR(r.x[1], -1.0, 1e-14);
  EXPECT_NEAR(r.value, -3.0, 1e-14);
}

TEST(Oracle, MatchesPlantedOptimum) {
  for (auto kind : {InstanceCase::Easy, InstanceCase::Hard1, InstanceCase::Hard2}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto inst = generate_instance({50, 0.1, 100.0, kind, seed});
      const auto r = oracle_solve(inst.problem);
      const double planted = inst.problem.f1.evaluate(inst.x_star);
      EXPECT_LE(rel_err(r.value, planted), 1e-10) << to_string(kind) << " seed " << seed;
      EXPECT_NEAR(r.multiplier, inst.lambda_star, 1e-7 * (1.0 + inst.lambda_star));
      EXPECT_EQ(r.hard_case, kind == InstanceCase::Hard2);
    }
  }
}

TEST(Oracle, TwoDimensionalGrid) {
  Gen g(5);
  for (int trial = 0; trial < 5; ++trial) {
    GtrsProblem p;
    p.f1 = form(SparseSymmetric::diagonal(Vec{g.uniform(0.5, 2.0), -g.uniform(0.5, 2.0)}), g.vec(2));
    p.f2 = form(SparseSymmetric::diagonal(Vec{-g.uniform(0.5, 1.0), g.uniform(2.0, 4.0)}), g.vec(2), -0.5);
    const auto r = oracle_solve(p);
    double best = INFINITY;
    const int N = 1200;
    for (int i = 0; i <= N; ++i)
      for (int j = 0; j <= N; ++j) {
        const Vec x{-6.0 + 12.0 * i / N, -6.0 + 12.0 * j / N};
        if (p.f2.evaluate(x) <= 0.0) best = std::min(best, p.f1.evaluate(x));
      }
    EXPECT_LE(r.value, best + 1e-9);
    EXPECT_GE(r.value, best - 0.05) << "trial " << trial;
    EXPECT_LE(p.f2.evaluate(r.x), 1e-9);
  }
}

TEST(Oracle, Errors) {
  GtrsProblem unb;
  unb.f1 = form(SparseSymmetric::diagonal(Vec{-1, -1}), Vec{0, 0});
  unb.f2 = form(SparseSymmetric::diagonal(Vec{-1, 1}), Vec{0, 0}, -1.0);
  try {
    oracle_solve(unb);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
  }
  GtrsProblem big;
  big.f1 = form(SparseSymmetric::identity(301), Vec(301, 0.0));
  big.f2 = form(SparseSymmetric::identity(301), Vec(301, 0.0), -1.0);
  try {
    oracle_solve(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
}

TEST(Pipeline, WorkedExampleEndToEnd) {
  for (auto alg : {Algorithm::Alg1, Algorithm::Alg2}) {
    const auto r = solve_auto(gtrs::testing::worked_example(), {}, alg);
    EXPECT_NEAR(r.report.objective, 2.0, 1e-9);
    EXPECT_NEAR(std::fabs(r.report.x[0]), std::sqrt(0.5), 1e-8);
    EXPECT_NEAR(r.report.x[1], -1.0, 1e-8);
    EXPECT_NEAR(r.report.constraint_residual, 0.0, 1e-8);
    EXPECT_NEAR(r.info.interval.lambda1, 1.0, 1e-10);
    EXPECT_NEAR(r.info.interval.lambda2, 3.0, 1e-10);
  }
}

TEST(Pipeline, MatchesOracleOnGeneratedInstances) {
  for (auto kind : {InstanceCase::Easy, InstanceCase::Hard1, InstanceCase::Hard2}) {
    for (std::uint64_t seed = 1; seed <= 2; ++seed) {
      const auto inst = generate_instance({30, 0.2, 10.0, kind, seed});
      const auto o = oracle_solve(inst.problem);
      for (auto alg : {Algorithm::Alg1, Algorithm::Alg2}) {
        const auto r = solve_auto(inst.problem, {}, alg);
        EXPECT_LE(rel_err(r.report.objective, o.value), 1e-8) << to_string(kind) << " " << to_string(alg);
        EXPECT_LE(std::fabs(r.report.constraint_residual), 1e-8);
        EXPECT_EQ(r.report.case_tag == CaseTag::Hard2, kind == InstanceCase::Hard2);
      }
    }
  }
}

TEST(Pipeline, InteriorIntervalProblem) {
  auto ip = tiny_ip(-1, 1);
  ip.a = {0.1, 0.2};
  const auto r = solve_ip(ip, {}, Algorithm::Alg1);
  EXPECT_EQ(r.report.case_tag, CaseTag::Interior);
  EXPECT_NEAR(r.report.x[0], 0.1, 1e-14);
  EXPECT_NEAR(r.report.x[1], 0.2, 1e-14);
}

TEST(Pipeline, ActiveIntervalProblemMatchesOracle) {
  const auto inst = generate_instance({30, 0.2, 10.0, InstanceCase::Easy, 4});
  const auto r = solve_ip(inst.ip, {}, Algorithm::Alg1);
  const auto o = oracle_solve(inst.problem);
  EXPECT_LE(rel_err(r.report.objective, o.value), 1e-8);
}

TEST(Pipeline, ErrorsCarryStage) {
  GtrsProblem unb;
  unb.f1 = form(SparseSymmetric::diagonal(Vec{-1, -1}), Vec{0, 0});
  unb.f2 = form(SparseSymmetric::diagonal(Vec{-1, 1}), Vec{0, 0}, -1.0);
  try {
    solve_auto(unb, {}, Algorithm::Alg1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unbounded);
    EXPECT_EQ(e.stage(), "find_lambda0");
  }
  SolverConfig bad;
  bad.sigma = 2.0;
  try {
    solve_auto(gtrs::testing::worked_example(), bad, Algorithm::Alg1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.stage(), "validate");
  }
}

TEST(Bundle, RoundTripIsExact) {
  const auto inst = generate_instance({20, 0.3, 10.0, InstanceCase::Easy, 2});
  const auto d = scratch_dir("roundtrip");
  write_bundle(d, inst.problem);
  const auto b = read_bundle(d);
  ASSERT_FALSE(b.ip);
  EXPECT_EQ(b.problem.f1.b, inst.problem.f1.b);
  EXPECT_EQ(b.problem.f2.b, inst.problem.f2.b);
  EXPECT_EQ(b.problem.f2.c, inst.problem.f2.c);
  ASSERT_EQ(b.problem.f1.Q.entries().size(), inst.problem.f1.Q.entries().size());
  for (std::size_t k = 0; k < b.problem.f1.Q.entries().size(); ++k)
    EXPECT_EQ(b.problem.f1.Q.entries()[k].value, inst.problem.f1.Q.entries()[k].value);

  const auto dip = scratch_dir("roundtrip_ip");
  write_bundle(dip, inst.ip);
  const auto bip = read_bundle(dip);
  ASSERT_TRUE(bip.ip);
  EXPECT_EQ(bip.ip->a, inst.ip.a);
  EXPECT_EQ(bip.ip->c1, inst.ip.c1);
  EXPECT_EQ(bip.ip->c2, inst.ip.c2);
}

TEST(Bundle, MalformedInputsNameTheCulprit) {
  auto p = gtrs::testing::worked_example();
  p.sense = ConstraintSense::Equality;
  const auto d = scratch_dir("malformed");
  write_bundle(d, p);
  EXPECT_EQ(read_bundle(d).problem.sense, ConstraintSense::Equality);

  auto expect_error = [&](const std::string& needle) {
    try {
      read_bundle(d);
      ADD_FAILURE() << "no error for " << needle;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
    }
  };
  auto write_json = [&](const std::string& text) { std::ofstream(d / "problem.json") << text; };

  write_json(R"({"n": 2, "b1": [0, -1], "b2": [0, 1], "c": 1, "sense": "maybe"})");
  expect_error("sense");
  write_json(R"({"n": 2, "b1": [0], "b2": [0, 1], "c": 1})");
  expect_error("b1");
  write_json(R"({"n": 2, "b1": [0, -1], "b2": [0, 1]})");
  expect_error("'c'");
  write_json(R"({"n": 2, "b1": [0, -1], )");
  expect_error("problem.json");
  write_json(R"({"n": 3, "b1": [0, -1, 0], "b2": [0, 1, 0], "c": 1})");
  expect_error("Q1.mtx");
  fs::remove(d / "Q2.mtx");
  write_json(R"({"n": 2, "b1": [0, -1], "b2": [0, 1], "c": 1})");
  expect_error("Q2.mtx");
}
