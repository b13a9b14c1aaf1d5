#pragma once

#include <optional>
#include <span>
#include <string>

#include "gtrs/cqr.hpp"
#include "gtrs/minimax.hpp"
#include "gtrs/pencil.hpp"

namespace gtrs {

enum class CaseTag { EasyOrHard1, Hard2, Interior };
const char* to_string(CaseTag c);

struct SolveReport {
  Vec x;
  double objective = 0.0;            // f1(x)
  double constraint_residual = 0.0;  // f2(x)
  double multiplier = 0.0;
  CaseTag case_tag = CaseTag::EasyOrHard1;
  std::size_t iterations = 0;
  Termination termination = Termination::Construction;
  std::optional<double> theta;  // step along the null direction, when one was taken
  bool recovery_direction_used = false;
  double minimax_value = 0.0;  // H at the minimax point (t)
  std::string note;
};

/// Turns a minimax point of a TwoConvex reformulation into a solution of the
/// original problem by moving along a Hessian null direction until both
/// values meet. `multiplier` of the report is the weight of the active side.
SolveReport recover_solution(const GtrsProblem& problem, const Reformulation& reform, std::span<const double> x_m,
                             double eps1 = 1e-8);

/// Same for the convex-constraint form: pushes an inactive constraint onto
/// the boundary along null(h_left) when the objective multiplier is positive.
SolveReport recover_convex_constraint(const GtrsProblem& problem, const Reformulation& reform,
                                      std::span<const double> x, double constraint_multiplier);

/// One Newton step on f2 along its gradient. Returns x unchanged when inactive,
/// on a vanishing gradient, or when the step would not reduce |f2|.
Vec newton_refine(const GtrsProblem& problem, std::span<const double> x, bool active);

enum class Boundary { Left, Right };

/// Direct construction when the linear term at an interval endpoint is
/// orthogonal to the Hessian's null space. Absent when that test fails or
/// the constructed point does not attain the endpoint's minimum.
struct HardCase2Point {
  Vec x;
  double value = 0.0;  // min h_i, the optimal value of max(h_i, h_j)
  std::optional<double> theta;
};

/// Core construction on a pair of convex quadratics, with `basis` spanning
/// null(h_i's Hessian): xhat = minimum-norm minimiser of h_i, then the best
/// point of h_j over xhat + span(basis); with `raise`, moved along the first
/// basis vector until h_j meets min h_i.
std::optional<HardCase2Point> hard_case2_point(const QuadraticForm& hi, const QuadraticForm& hj,
                                               const std::vector<Vec>& basis, bool raise,
                                               std::shared_ptr<const Preconditioner> precond = nullptr);

std::optional<SolveReport> hard_case2_attempt(const GtrsProblem& problem, const PencilInterval& interval,
                                              Boundary boundary);

/// Unit vectors spanning the null space of h's Hessian: `hint` when given,
/// otherwise a null-space computation with relative tolerance `tol`.
std::vector<Vec> hessian_null_basis(const QuadraticForm& h, const Vec& hint, double tol = 1e-8);

}  // namespace gtrs
